#include "tsa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "tsa/analysis.hpp"
#include "tsa/automata.hpp"
#include "tsa/contracts.hpp"
#include "tsa/dfa_analysis.hpp"
#include "tsa/error.hpp"
#include "tsa/parser.hpp"

namespace tsa {

namespace {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    // [0, bound); plain modulo so results do not depend on the standard
    // library's distribution implementations
    std::uint64_t next(std::uint64_t bound) { return bound ? m_engine() % bound : 0; }

  private:
    std::mt19937_64 m_engine;
};

std::string num2(std::uint32_t i) {
    std::string s = std::to_string(i);
    return s.size() < 2 ? "0" + s : s;
}

void validate_contract_spec(const ContractSpec &spec) {
    if (spec.name.empty())
        fail(ErrorKind::spec_invalid, "contract name must not be empty");
    if (spec.toggle_pairs * 2 + spec.chain_length > spec.methods)
        fail(ErrorKind::spec_invalid,
             "toggle_pairs*2 + chain_length exceeds methods (" +
                 std::to_string(spec.toggle_pairs) + "*2 + " + std::to_string(spec.chain_length) +
                 " > " + std::to_string(spec.methods) + ")");
}

std::uint32_t free_methods(const ContractSpec &spec) {
    return spec.methods - spec.toggle_pairs * 2 - spec.chain_length;
}

} // namespace

std::string gen_contract(const ContractSpec &spec) {
    validate_contract_spec(spec);
    std::uint32_t frees = free_methods(spec);

    std::vector<std::string> lines;
    lines.push_back("class " + spec.name + " {");

    if (spec.toggle_pairs > 0) {
        // The toggles guard each other, so without an explicit constructor
        // nothing would enable the first acquire.
        std::string args;
        for (std::uint32_t i = 1; i <= spec.toggle_pairs; ++i)
            args += (args.empty() ? "" : ", ") + ("acquire" + num2(i));
        for (std::uint32_t i = 1; i <= spec.chain_length; ++i)
            args += ", step" + num2(i);
        for (std::uint32_t i = 1; i <= frees; ++i)
            args += ", query" + num2(i);
        lines.push_back("    @EnableOnly(" + args + ")");
        lines.push_back("    void " + spec.name + "();");
    } else if (spec.chain_length == 0) {
        // No annotated methods at all; the constructor annotation keeps this
        // a contract class.
        lines.push_back("    @EnableAll");
        lines.push_back("    void " + spec.name + "();");
    }

    for (std::uint32_t i = 1; i <= spec.toggle_pairs; ++i) {
        lines.push_back("    @Enable(release" + num2(i) + ")");
        lines.push_back("    @Disable(acquire" + num2(i) + ")");
        lines.push_back("    void acquire" + num2(i) + "();");
        lines.push_back("    @Enable(acquire" + num2(i) + ")");
        lines.push_back("    @Disable(release" + num2(i) + ")");
        lines.push_back("    void release" + num2(i) + "();");
    }
    for (std::uint32_t i = 1; i <= spec.chain_length; ++i) {
        lines.push_back("    @Enable(step" + num2(i) + ")");
        lines.push_back("    void step" + num2(i) + "();");
    }
    for (std::uint32_t i = 1; i <= frees; ++i)
        lines.push_back("    void query" + num2(i) + "();");

    lines.push_back("}");

    std::string out;
    for (const auto &l : lines)
        out += l + "\n";
    return out;
}

namespace {

// Exact automaton state of one generated object, used to keep every emitted
// call sequence valid.
struct ObjectTracker {
    ContractMap contract;
    StateVector state;
    std::string path;

    std::vector<MethodId> valid_calls() const {
        std::vector<MethodId> out;
        for (std::uint32_t m = 1; m < contract.arity(); ++m)
            if (contract.entry(MethodId{m}).pre.subset_of(state))
                out.push_back(MethodId{m});
        return out;
    }

    std::vector<MethodId> preserving_calls() const {
        std::vector<MethodId> out;
        for (MethodId m : valid_calls())
            if (*apply_triple(contract.entry(m), state) == state)
                out.push_back(m);
        return out;
    }

    void apply(MethodId m) { state = *apply_triple(contract.entry(m), state); }
};

struct ClientPlan {
    std::vector<std::string> contract_texts;
    std::vector<ObjectTracker> objects;
    std::uint32_t segments = 1;
};

std::string base_name(const ContractSpec &contract, std::uint32_t index) {
    return contract.name + num2(index);
}

ClientPlan make_plan(const ClientSpec &client, const ContractSpec &contract) {
    if (client.loc_target < 10)
        fail(ErrorKind::spec_invalid, "loc_target must be at least 10");
    if (client.num_base_classes < 1)
        fail(ErrorKind::spec_invalid, "num_base_classes must be at least 1");
    for (double d : {client.branch_density, client.loop_density})
        if (d < 0.0 || d > 1.0)
            fail(ErrorKind::spec_invalid, "densities must lie in [0,1]");
    if (client.inject_bug && contract.toggle_pairs == 0)
        fail(ErrorKind::spec_invalid,
             "inject_bug needs at least one toggle pair, otherwise every sequence is valid");

    ClientPlan plan;
    for (std::uint32_t b = 1; b <= client.num_base_classes; ++b) {
        ContractSpec named = contract;
        named.name = base_name(contract, b);
        std::string text = gen_contract(named);
        Program prog = parse_program(text, "<generated>");
        ObjectTracker tracker;
        tracker.contract = build_contract(prog.classes.at(0));
        StateVector initial = MethodSet::single(tracker.contract.arity(), 0);
        tracker.state = *apply_triple(tracker.contract.entry(MethodId{0}), initial);
        tracker.path = client.composition_depth > 0 ? "this.f" + num2(b) : "x" + num2(b);
        plan.contract_texts.push_back(std::move(text));
        plan.objects.push_back(std::move(tracker));
    }
    plan.segments = client.composition_depth > 0 ? 4 : 1;
    return plan;
}

// One generated call line plus its optional decoration lines.
struct CallLines {
    std::vector<std::string> lines;
};

std::uint32_t count_scaffold_lines(const ClientSpec &client, const ClientPlan &plan) {
    std::uint32_t n = 0;
    for (const auto &text : plan.contract_texts)
        n += static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n')) + 1; // +1 blank
    if (client.composition_depth > 0) {
        // layer 1: class/brace + one field per base + per-segment method
        // header and brace, blank line after the class
        n += 3 + client.num_base_classes + plan.segments * 2;
        // upper layers: class/brace + field + forwarder methods (3 lines each)
        if (client.composition_depth > 1)
            n += (client.composition_depth - 1) * (3 + 1 + plan.segments * 3);
    }
    // driver: header + brace + one declaration (layered) or one per base
    n += 2 + (client.composition_depth > 0 ? 1 + plan.segments : client.num_base_classes);
    if (client.inject_bug)
        n += 2;
    return n;
}

} // namespace

GeneratedClient gen_client(const ClientSpec &client, const ContractSpec &contract) {
    ClientPlan plan = make_plan(client, contract);
    Rng rng(client.seed);

    std::uint32_t scaffold = count_scaffold_lines(client, plan);
    if (scaffold + plan.segments > client.loc_target)
        fail(ErrorKind::spec_invalid, "loc_target " + std::to_string(client.loc_target) +
                                          " too small: scaffolding alone needs " +
                                          std::to_string(scaffold + plan.segments) + " lines");

    // Decorations only work when some call leaves the state unchanged, which
    // chain and free methods always do.
    bool can_decorate = contract.chain_length > 0 || free_methods(contract) > 0;

    std::uint32_t budget = client.loc_target - scaffold;
    double per_call = 1.0 + 3.0 * (client.branch_density + client.loop_density);
    std::uint32_t n_calls =
        std::max(plan.segments, static_cast<std::uint32_t>(std::floor(budget / per_call)));
    std::uint32_t n_branch = 0;
    std::uint32_t n_loop = 0;
    auto decor_counts = [&](std::uint32_t n) {
        n_branch = can_decorate ? static_cast<std::uint32_t>(
                                      std::floor(client.branch_density * n + 0.5))
                                : 0;
        n_loop = can_decorate
                     ? static_cast<std::uint32_t>(std::floor(client.loop_density * n + 0.5))
                     : 0;
        n_branch = std::min(n_branch, n);
        n_loop = std::min(n_loop, n - n_branch);
    };
    decor_counts(n_calls);
    while (n_calls > plan.segments && n_calls + 3 * (n_branch + n_loop) > budget) {
        --n_calls;
        decor_counts(n_calls);
    }
    while (n_branch + n_loop > 0 && n_calls + 3 * (n_branch + n_loop) > budget) {
        if (n_loop)
            --n_loop;
        else
            --n_branch;
    }
    // top up with plain calls so the emitted file hits loc_target exactly
    if (budget > n_calls + 3 * (n_branch + n_loop))
        n_calls += budget - n_calls - 3 * (n_branch + n_loop);

    // Positions (among call indices) that get a decoration appended.
    std::vector<std::uint32_t> decoration(n_calls, 0); // 0 none, 1 branch, 2 loop
    std::uint32_t placed = 0;
    while (placed < n_branch + n_loop && placed < n_calls) {
        std::uint32_t at = static_cast<std::uint32_t>(rng.next(n_calls));
        if (decoration[at])
            continue;
        decoration[at] = placed < n_branch ? 1 : 2;
        ++placed;
    }

    // Emit the call region, tracking object states so the sequence stays
    // valid. Decorations use only calls that leave the state unchanged.
    std::vector<CallLines> calls;
    std::string indent = client.composition_depth > 0 ? "        " : "    ";
    for (std::uint32_t i = 0; i < n_calls; ++i) {
        std::uint32_t b = static_cast<std::uint32_t>(rng.next(plan.objects.size()));
        ObjectTracker &obj = plan.objects[b];
        auto valid = obj.valid_calls();
        if (valid.empty())
            fail(ErrorKind::internal, "generated object has no valid calls");
        MethodId m = valid[rng.next(valid.size())];
        CallLines cl;
        cl.lines.push_back(indent + obj.path + "." + obj.contract.method_name(m) + "();");
        obj.apply(m);
        if (decoration[i]) {
            auto preserving = obj.preserving_calls();
            if (!preserving.empty()) {
                MethodId pm = preserving[rng.next(preserving.size())];
                cl.lines.push_back(indent + (decoration[i] == 1 ? "if (?) {" : "loop {"));
                cl.lines.push_back(indent + "    " + obj.path + "." +
                                   obj.contract.method_name(pm) + "();");
                cl.lines.push_back(indent + "}");
            }
        }
        calls.push_back(std::move(cl));
    }

    // Distribute the call region over the layer-1 segments.
    std::vector<std::vector<std::string>> segments(plan.segments);
    for (std::uint32_t i = 0; i < calls.size(); ++i) {
        std::uint32_t seg = i * plan.segments / static_cast<std::uint32_t>(calls.size());
        for (auto &l : calls[i].lines)
            segments[seg].push_back(std::move(l));
    }

    std::vector<std::string> lines;
    for (const auto &text : plan.contract_texts) {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l))
            lines.push_back(l);
        lines.emplace_back();
    }

    if (client.composition_depth > 0) {
        lines.push_back("class Layer01 {");
        for (std::uint32_t b = 1; b <= client.num_base_classes; ++b)
            lines.push_back("    " + base_name(contract, b) + " f" + num2(b) + ";");
        for (std::uint32_t s = 0; s < plan.segments; ++s) {
            lines.push_back("    void run" + num2(s + 1) + "() {");
            for (auto &l : segments[s])
                lines.push_back(std::move(l));
            lines.push_back("    }");
        }
        lines.push_back("}");
        lines.emplace_back();
        for (std::uint32_t d = 2; d <= client.composition_depth; ++d) {
            lines.push_back("class Layer" + num2(d) + " {");
            lines.push_back("    Layer" + num2(d - 1) + " f;");
            for (std::uint32_t s = 0; s < plan.segments; ++s) {
                lines.push_back("    void run" + num2(s + 1) + "() {");
                lines.push_back("        this.f.run" + num2(s + 1) + "();");
                lines.push_back("    }");
            }
            lines.push_back("}");
            lines.emplace_back();
        }
    }

    GeneratedClient out;
    lines.push_back("void client01() {");
    if (client.composition_depth > 0) {
        std::string top = "Layer" + num2(client.composition_depth);
        lines.push_back("    " + top + " obj;");
        for (std::uint32_t s = 0; s < plan.segments; ++s)
            lines.push_back("    obj.run" + num2(s + 1) + "();");
    } else {
        for (std::uint32_t b = 1; b <= client.num_base_classes; ++b)
            lines.push_back("    " + base_name(contract, b) + " x" + num2(b) + ";");
        for (auto &seg : segments)
            for (auto &l : seg)
                lines.push_back(std::move(l));
    }
    if (client.inject_bug) {
        lines.push_back("    " + base_name(contract, 1) + " oops;");
        lines.push_back("    oops.release01();");
        out.injected_line = static_cast<int>(lines.size());
    }
    lines.push_back("}");

    for (const auto &l : lines)
        out.text += l + "\n";
    out.loc = static_cast<std::uint32_t>(lines.size());
    return out;
}

namespace {

std::uint64_t parse_u64(const std::string &value, const std::string &key) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception &) {
        fail(ErrorKind::spec_invalid, "bad integer for " + key + ": '" + value + "'");
    }
}

double parse_f64(const std::string &value, const std::string &key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception &) {
        fail(ErrorKind::spec_invalid, "bad number for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string &value, const std::string &key) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    fail(ErrorKind::spec_invalid, "bad boolean for " + key + ": '" + value + "'");
}

std::string trim(const std::string &s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

std::vector<BenchCell> parse_matrix(const std::string &text) {
    std::vector<BenchCell> cells;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                fail(ErrorKind::spec_invalid,
                     "matrix line " + std::to_string(lineno) + ": malformed section header");
            BenchCell cell;
            cell.id = trim(t.substr(1, t.size() - 2));
            cells.push_back(std::move(cell));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos || cells.empty())
            fail(ErrorKind::spec_invalid,
                 "matrix line " + std::to_string(lineno) + ": expected [cell] or key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        BenchCell &cell = cells.back();
        if (key == "methods")
            cell.contract.methods = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "toggle_pairs")
            cell.contract.toggle_pairs = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "chain_length")
            cell.contract.chain_length = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "name")
            cell.contract.name = value;
        else if (key == "loc")
            cell.client.loc_target = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "bases")
            cell.client.num_base_classes = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "depth")
            cell.client.composition_depth = static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "branch_density")
            cell.client.branch_density = parse_f64(value, key);
        else if (key == "loop_density")
            cell.client.loop_density = parse_f64(value, key);
        else if (key == "seed") {
            cell.client.seed = parse_u64(value, key);
            cell.contract.seed = cell.client.seed;
        } else if (key == "inject_bug")
            cell.client.inject_bug = parse_bool(value, key);
        else if (key == "runs")
            cell.runs = static_cast<int>(parse_u64(value, key));
        else
            fail(ErrorKind::spec_invalid,
                 "matrix line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (cells.empty())
        fail(ErrorKind::spec_invalid, "matrix defines no cells");
    return cells;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

// Per-run milliseconds for `runs` measurements of fn(), with one warmup and
// enough inner repetitions that a single measurement is not timer noise.
template <typename Fn> std::vector<double> time_runs(Fn &&fn, int runs) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double once = ms_since(t0);
    int reps = once >= 5.0 ? 1 : static_cast<int>(std::min(1000.0, std::ceil(5.0 / std::max(once, 1e-4))));

    for (int r = 0; r < reps; ++r)
        fn(); // warmup round

    std::vector<double> out;
    for (int run = 0; run < runs; ++run) {
        auto start = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            fn();
        out.push_back(ms_since(start) / reps);
    }
    return out;
}

std::string fmt_ms(double ms) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << ms;
    return os.str();
}

} // namespace

BenchOutput run_bench(const std::vector<BenchCell> &cells) {
    BenchOutput out;
    out.results_csv = "contract_id,methods,states_min,annotations_bfa,annotations_dfa,loc,"
                      "base_classes,analyzer,run,wall_ms,warnings,seed\n";
    out.usability_csv = "contract_id,methods,states_min,annotations_bfa,annotations_dfa\n";

    for (const BenchCell &cell : cells) {
        GeneratedClient generated = gen_client(cell.client, cell.contract);
        Program prog = parse_program(generated.text, cell.id + ".tsl");
        ProgramInfo info = resolve_program(std::move(prog));

        std::string first_base = cell.contract.name + "01";
        const ContractMap &contract = info.contracts.at(first_base);
        long long states_min = -1;
        long long annotations_dfa = -1;
        try {
            MinimizedDfa minimized = minimize_dfa(expand_dfa(contract));
            states_min = static_cast<long long>(minimized.num_states);
            annotations_dfa = static_cast<long long>(2 * minimized.num_transitions());
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::state_explosion)
                throw;
        }
        std::size_t annotations_bfa = count_annotation_terms(*info.classes.at(first_base));

        std::string prefix = cell.id + "," + std::to_string(cell.contract.methods) + "," +
                             std::to_string(states_min) + "," + std::to_string(annotations_bfa) +
                             "," + std::to_string(annotations_dfa) + "," +
                             std::to_string(generated.loc) + "," +
                             std::to_string(cell.client.num_base_classes) + ",";
        std::string suffix = "," + std::to_string(cell.client.seed) + "\n";

        int runs = std::max(cell.runs, 1);

        std::size_t bfa_warnings = 0;
        std::vector<double> bfa_times =
            time_runs([&] { bfa_warnings = analyze_program(info).warnings.size(); }, runs);
        for (int r = 0; r < runs; ++r)
            out.results_csv += prefix + "bfa," + std::to_string(r + 1) + "," +
                               fmt_ms(bfa_times[r]) + "," + std::to_string(bfa_warnings) + suffix;

        try {
            std::size_t dfa_warnings = 0;
            std::vector<double> dfa_times =
                time_runs([&] { dfa_warnings = dfa_analyze_program(info).warnings.size(); }, runs);
            for (int r = 0; r < runs; ++r)
                out.results_csv += prefix + "dfa," + std::to_string(r + 1) + "," +
                                   fmt_ms(dfa_times[r]) + "," + std::to_string(dfa_warnings) +
                                   suffix;
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::state_explosion)
                throw;
            for (int r = 0; r < runs; ++r)
                out.results_csv += prefix + "dfa," + std::to_string(r + 1) + ",-1,-1" + suffix;
        }

        out.usability_csv += cell.id + "," + std::to_string(cell.contract.methods) + "," +
                             std::to_string(states_min) + "," + std::to_string(annotations_bfa) +
                             "," + std::to_string(annotations_dfa) + "\n";
    }
    return out;
}

} // namespace tsa
