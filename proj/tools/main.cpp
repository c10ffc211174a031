// hamembed: decide and construct embeddings of edge-colored
// K(a^(p); lambda, mu) into Hamiltonian decompositions of
// K(a^(p+r); lambda, mu).
//
// Exit codes: 0 success / embeddable, 2 conditions fail, 3 undetermined or
// search budget exhausted, 4 input error, 5 internal contract violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hamembed/io.hpp"
#include "hamembed/oracle.hpp"
#include "hamembed/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConditionsFail = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitInputError = 4;
constexpr int kExitInternalError = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HAMEMBED_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

int run_check(const std::string& file, const std::string& format) {
    hamembed::Instance inst = hamembed::parse_instance(read_file(file));
    hamembed::Regime regime = hamembed::classify_regime(inst.params);
    hamembed::Verdict verdict = inst.params.is_boundary()
                                    ? hamembed::check_boundary_conditions(inst.graph, inst.params)
                                    : hamembed::check_main_conditions(inst.graph, inst.params);
    bool sum_ok = inst.params.is_boundary() ||
                  hamembed::check_sum_condition(verdict.stats, inst.params);

    bool decided = verdict.passed() && (inst.params.is_boundary() || sum_ok);
    if (format == "table") {
        std::cout << "regime: " << hamembed::regime_name(regime.tag)
                  << (regime.needs_instance ? " (instance-level sum condition required)" : "")
                  << "\n";
        std::cout << "conditions: " << (verdict.passed() ? "pass" : "FAIL") << "\n";
        for (std::size_t i = 0; i < verdict.violated.size(); ++i)
            std::cout << "  " << verdict.violated[i] << ": " << verdict.details[i] << "\n";
        if (!inst.params.is_boundary())
            std::cout << "sum condition (eq2): " << (sum_ok ? "holds" : "fails") << "\n";
        std::cout << "class stats (color, omega, s, mixed):\n";
        for (const hamembed::ClassStats& st : verdict.stats)
            std::cout << "  " << st.color << ", " << st.omega << ", " << st.s << ", "
                      << st.mixed_edges << "\n";
    } else {
        nlohmann::json j;
        j["regime"] = hamembed::regime_name(regime.tag);
        j["conditions_pass"] = verdict.passed();
        j["violated"] = verdict.violated;
        j["sum_condition"] = sum_ok;
        std::cout << j.dump(2) << "\n";
    }
    if (!verdict.passed()) return kExitConditionsFail;
    return decided ? kExitOk : kExitUndetermined;
}

int run_embed(const std::string& file, std::uint64_t seed, const std::string& out_path) {
    hamembed::Instance inst = hamembed::parse_instance(read_file(file));
    hamembed::EmbedReport report = hamembed::embed(inst.graph, inst.params, seed);
    write_output(out_path, hamembed::serialize_result(report, inst.params));
    switch (report.verdict.embeddable) {
        case hamembed::Verdict::Answer::yes: return kExitOk;
        case hamembed::Verdict::Answer::no: return kExitConditionsFail;
        case hamembed::Verdict::Answer::undetermined: return kExitUndetermined;
    }
    return kExitInternalError;
}

int run_verify(const std::string& instance_file, const std::string& result_file) {
    hamembed::Instance inst = hamembed::parse_instance(read_file(instance_file));
    hamembed::ColoredMultigraph result =
        hamembed::parse_result_graph(read_file(result_file), inst.params);
    std::vector<std::string> fail = hamembed::verify_embedding(inst.graph, result, inst.params);
    if (fail.empty()) {
        std::cout << "verified: result is a Hamiltonian decomposition extending the instance\n";
        return kExitOk;
    }
    for (const std::string& s : fail) std::cout << "violation: " << s << "\n";
    return kExitConditionsFail;
}

int run_gen(const hamembed::GddParams& params, std::uint64_t seed, const std::string& out_path) {
    hamembed::EnumerationBudget budget;
    budget.timeout = std::chrono::milliseconds(60000);
    hamembed::GeneratedInput gen = hamembed::generate_valid_input(params, seed, budget);
    if (gen.status == hamembed::OracleStatus::timeout) {
        std::cerr << "gen: search budget exhausted\n";
        return kExitUndetermined;
    }
    if (gen.status == hamembed::OracleStatus::none) {
        std::cerr << "gen: K(a^(p+r); lambda, mu) has no Hamiltonian decomposition\n";
        return kExitConditionsFail;
    }
    write_output(out_path, hamembed::serialize_instance(params, *gen.instance));
    return kExitOk;
}

int run_oracle(const hamembed::GddParams& params, int parts) {
    hamembed::EnumerationBudget budget;
    budget.timeout = std::chrono::milliseconds(60000);
    hamembed::OracleOutcome outcome = hamembed::brute_force_decompose(params, parts, budget);
    if (outcome.status == hamembed::OracleStatus::timeout) {
        std::cerr << "oracle: search budget exhausted\n";
        return kExitUndetermined;
    }
    if (outcome.status == hamembed::OracleStatus::none) {
        std::cout << "no Hamiltonian decomposition exists\n";
        return kExitConditionsFail;
    }
    const hamembed::ColoredMultigraph& dec = *outcome.decomposition;
    std::cout << "Hamiltonian decomposition into " << dec.max_color() << " cycles:\n";
    for (int c = 1; c <= dec.max_color(); ++c) {
        std::cout << "  color " << c << ":";
        for (const hamembed::VertexId& v : hamembed::cycle_order(dec, c))
            std::cout << " p" << v.part << ".v" << v.slot;
        std::cout << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"embedding of edge-colored equipartite multigraphs into Hamiltonian decompositions"};
    app.require_subcommand(1);

    std::string file, out_path, result_file, format = "table";
    std::uint64_t seed = default_seed();
    hamembed::GddParams params;
    int parts = 1;

    CLI::App* check = app.add_subcommand("check", "evaluate embedding conditions and regime");
    check->add_option("file", file, "instance file")->required();
    check->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    CLI::App* embed = app.add_subcommand("embed", "construct the embedding when possible");
    embed->add_option("file", file, "instance file")->required();
    embed->add_option("--seed", seed, "random seed (default: HAMEMBED_SEED or 0)");
    embed->add_option("--out", out_path, "write the result file here instead of stdout");

    CLI::App* verify = app.add_subcommand("verify", "check a result file against its instance");
    verify->add_option("instance", file, "instance file")->required();
    verify->add_option("result", result_file, "result file")->required();

    CLI::App* gen = app.add_subcommand("gen", "generate a valid instance via the oracle");
    gen->add_option("--a", params.a, "part size")->required();
    gen->add_option("--p", params.p, "part count")->required();
    gen->add_option("--lambda", params.lambda, "pure multiplicity")->required();
    gen->add_option("--mu", params.mu, "mixed multiplicity")->required();
    gen->add_option("--r", params.r, "parts added by the embedding")->required();
    gen->add_option("--seed", seed, "random seed (default: HAMEMBED_SEED or 0)");
    gen->add_option("--out", out_path, "write the instance here instead of stdout");

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force Hamiltonian decomposition");
    oracle->add_option("--a", params.a, "part size")->required();
    oracle->add_option("--parts", parts, "number of parts")->required();
    oracle->add_option("--lambda", params.lambda, "pure multiplicity")->required();
    oracle->add_option("--mu", params.mu, "mixed multiplicity")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(file, format);
        if (embed->parsed()) return run_embed(file, seed, out_path);
        if (verify->parsed()) return run_verify(file, result_file);
        if (gen->parsed()) return run_gen(params, seed, out_path);
        if (oracle->parsed()) return run_oracle(params, parts);
    } catch (const hamembed::ParseError& e) {
        std::cerr << "input error [" << hamembed::parse_code_name(e.code()) << "]: " << e.what()
                  << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitInputError;
}
