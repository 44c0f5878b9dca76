#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "advbound/analyzer.hpp"
#include "advbound/cert.hpp"
#include "advbound/descriptor.hpp"
#include "advbound/oracles.hpp"

using namespace advbound;

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

SimpleGraph load_graph(const std::string& path) {
    return SimpleGraph::from_edge_list(read_file(path));
}

Input parse_input(const std::string& csv) {
    Input x;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        int v = std::stoi(tok);
        if (v < 0 || v > 255) throw CLI::ValidationError("--input", "symbol out of range");
        x.push_back(static_cast<Value>(v));
    }
    if (x.empty()) throw CLI::ValidationError("--input", "empty input word");
    return x;
}

void emit(const std::string& out_path, const nlohmann::json& j) {
    write_output(out_path, j.dump(2) + "\n");
}

// ---- analyze ----------------------------------------------------------

struct AnalyzeArgs {
    int k_max = 6;
    bool csv = false;
    int k = 3;
    double n = 1e6;
    std::vector<double> r;
    long long gc_n = 0;
    long long alpha_cap = 0;
    std::string out;
};

void setup_analyze(CLI::App& app, AnalyzeArgs& args, int& rc) {
    CLI::App* analyze = app.add_subcommand("analyze", "symbolic and numeric cost analysis");
    analyze->require_subcommand(1);

    CLI::App* exps = analyze->add_subcommand("exponents", "exact query exponents per k");
    exps->add_option("--k-max", args.k_max, "largest k to tabulate")->check(CLI::Range(2, 30));
    exps->add_flag("--csv", args.csv, "emit CSV instead of JSON");
    exps->add_option("--out", args.out, "output file (default stdout)");
    exps->callback([&args, &rc] {
        auto rows = exponent_table(args.k_max);
        if (args.csv) {
            write_output(args.out, exponent_table_csv(rows));
        } else {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& row : rows)
                j.push_back({{"k", row.k},
                             {"exponent", rat_to_json(row.exponent)},
                             {"exponentValue", to_double(row.exponent)},
                             {"johnson", rat_to_json(row.johnson)},
                             {"johnsonValue", to_double(row.johnson)}});
            emit(args.out, j);
        }
        rc = kExitFeasible;
    });

    CLI::App* plan = analyze->add_subcommand("plan", "full exponent plan for one k");
    plan->add_option("--k", args.k, "tuple order")->required()->check(CLI::Range(2, 30));
    plan->add_option("--out", args.out, "output file (default stdout)");
    plan->callback([&args, &rc] {
        emit(args.out, kdist_plan(args.k).to_json());
        rc = kExitFeasible;
    });

    CLI::App* stages = analyze->add_subcommand("stages", "numeric stage costs at given sizes");
    stages->add_option("--k", args.k, "tuple order")->required()->check(CLI::Range(2, 30));
    stages->add_option("--n", args.n, "input length")->required();
    stages->add_option("--r", args.r, "subset sizes (default: balanced profile)")
        ->delimiter(',');
    stages->add_option("--out", args.out, "output file (default stdout)");
    stages->callback([&args, &rc] {
        std::vector<double> r = args.r;
        nlohmann::json j;
        if (r.empty()) {
            std::vector<long long> sizes = sizes_from_profile(args.k, args.n);
            r.assign(sizes.begin(), sizes.end());
            j["profileSizes"] = sizes;
        }
        j["costs"] = stage_costs(args.k, args.n, r).to_json();
        emit(args.out, j);
        rc = kExitFeasible;
    });

    CLI::App* gc = analyze->add_subcommand("gc", "graph collision subset-size plan");
    gc->add_option("--n", args.gc_n, "number of vertices")->required();
    gc->add_option("--alpha-cap", args.alpha_cap, "independence cap")->required();
    gc->add_option("--out", args.out, "output file (default stdout)");
    gc->callback([&args, &rc] {
        emit(args.out, gc_plan(args.gc_n, args.alpha_cap).to_json());
        rc = kExitFeasible;
    });
}

// ---- build ------------------------------------------------------------

struct BuildArgs {
    std::string construction;
    int n = 0;
    int m = 0;
    int k = 2;
    std::vector<int> r;
    int alpha_cap = 0;
    std::string graph_path;
    std::uint64_t seed = 0;
    std::vector<int> sample;
    std::string promise = "default";
    double pair_cap_c = 0;
    std::string out;
};

Descriptor descriptor_from_args(const BuildArgs& a) {
    Descriptor d;
    d.construction = construction_from_name(a.construction);
    if (d.construction == Construction::GraphCollision) {
        d.graph = load_graph(a.graph_path);
        d.n = a.n ? a.n : d.graph.n;
        d.m = 2;
        d.alpha_cap = a.alpha_cap;
        d.promise = PromiseMode::MaxOnes;
    } else {
        d.n = a.n;
        d.m = a.m;
        d.k = a.k;
        d.promise = PromiseMode::UniqueKTuple;
    }
    d.r = a.r;
    d.seed = a.seed;
    if (!a.sample.empty()) {
        d.exhaustive = false;
        d.sample_pos = a.sample[0];
        d.sample_neg = a.sample.size() > 1 ? a.sample[1] : a.sample[0];
    }
    if (a.promise != "default") {
        PromiseSpec p;
        p.mode = PromiseMode::None;
        nlohmann::json pj{{"mode", a.promise}};
        if (a.promise == "unique-ktuple") pj["k"] = d.k;
        if (a.promise == "max-ones") pj["maxOnes"] = 2 * d.alpha_cap;
        if (a.promise == "pair-cap") {
            pj["k"] = d.k;
            pj["c"] = a.pair_cap_c;
        }
        p = PromiseSpec::from_json(pj);
        d.promise = p.mode;
        d.pair_cap_c = p.pair_cap_c;
    }
    return Descriptor::from_json(d.to_json());  // canonicalize and validate
}

void setup_build(CLI::App& app, BuildArgs& args, int& rc) {
    CLI::App* build = app.add_subcommand("build", "emit a certificate descriptor");
    build->add_option("--construction", args.construction,
                      "johnson | graph-collision | kdist-first | kdist-final")
        ->required();
    build->add_option("--n", args.n, "input length / vertex count");
    build->add_option("--m", args.m, "alphabet size");
    build->add_option("--k", args.k, "tuple order");
    build->add_option("--r", args.r, "subset sizes")->delimiter(',');
    build->add_option("--alpha-cap", args.alpha_cap, "independence cap");
    build->add_option("--graph", args.graph_path, "edge list file, 1-based \"u v\" lines");
    build->add_option("--seed", args.seed, "domain sampling seed");
    build->add_option("--sample", args.sample, "positive and negative sample counts")
        ->delimiter(',')
        ->expected(1, 2);
    build->add_option("--promise", args.promise,
                      "none | unique-ktuple | max-ones | pair-cap (default per construction)");
    build->add_option("--pair-cap-c", args.pair_cap_c, "pair-cap coefficient");
    build->add_option("--out", args.out, "output file (default stdout)");
    build->callback([&args, &rc] {
        write_output(args.out, descriptor_from_args(args).to_string());
        rc = kExitFeasible;
    });
}

// ---- verify -----------------------------------------------------------

struct VerifyArgs {
    std::string descriptor_path;
    std::string pairs = "all";
    std::uint64_t pair_seed = 0;
    int psd_vars = 0;
    int psd_cap = 60;
    std::uint64_t psd_seed = 17;
    int glue_cap = 0;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    Descriptor d = Descriptor::from_string(read_file(a.descriptor_path));
    std::unique_ptr<Certificate> cert = d.build();

    PairMode mode = PairMode::all();
    if (a.pairs != "all") {
        long long count = std::stoll(a.pairs);
        if (count <= 0) throw CLI::ValidationError("--pairs", "need a positive count");
        mode = PairMode::sample(count, a.pair_seed);
    }
    VerificationReport rep = verify_all_pairs(*cert, mode);

    nlohmann::json out{{"descriptor", d.to_json()}, {"report", rep.to_json()}};
    out["unit"] = rat_to_json(cert->unit());
    bool pass = rep.feasible;

    if (a.psd_vars > 0) {
        std::vector<Input> sample = psd_sample(cert->domain(), a.psd_cap, a.psd_seed);
        nlohmann::json psd = nlohmann::json::array();
        int step = std::max(1, d.n / a.psd_vars);
        for (int j = 0; j < d.n; j += step) {
            PsdReport pr = psd_spotcheck(*cert, j, sample);
            psd.push_back(pr.to_json());
            pass = pass && pr.pass;
        }
        out["psd"] = psd;
    }
    if (a.glue_cap > 0) {
        std::vector<Input> sample = psd_sample(cert->domain(), a.glue_cap, a.psd_seed);
        double diag = generator_diagonal_deviation(*cert, sample);
        double cross = generator_cross_deviation(*cert, sample);
        out["glue"] = {{"diagonal", diag}, {"cross", cross}};
        pass = pass && diag < 1e-6 && cross < 1e-6;
    }
    out["pass"] = pass;
    emit(a.out, out);
    return pass ? kExitFeasible : kExitInfeasible;
}

void setup_verify(CLI::App& app, VerifyArgs& args, int& rc) {
    CLI::App* verify = app.add_subcommand("verify", "rebuild a certificate and check it");
    verify->add_option("--descriptor", args.descriptor_path, "descriptor JSON file")
        ->required();
    verify->add_option("--pairs", args.pairs, "\"all\" or a sample count");
    verify->add_option("--pair-seed", args.pair_seed, "pair sampling seed");
    verify->add_option("--psd", args.psd_vars, "spot check this many variable indices");
    verify->add_option("--psd-cap", args.psd_cap, "input sample cap for the PSD check");
    verify->add_option("--psd-seed", args.psd_seed, "input sampling seed");
    verify->add_option("--glue", args.glue_cap,
                       "check factored against summed entries on this many inputs");
    verify->add_option("--out", args.out, "report file (default stdout)");
    verify->callback([&args, &rc] { rc = run_verify(args); });
}

// ---- oracle -----------------------------------------------------------

struct OracleArgs {
    int k = 2;
    int m = 0;
    int n = 0;
    std::string graph_path;
    std::string input;
    std::string out;
};

void setup_oracle(CLI::App& app, OracleArgs& args, int& rc) {
    CLI::App* oracle = app.add_subcommand("oracle", "reference function evaluations");
    oracle->require_subcommand(1);

    CLI::App* kd = oracle->add_subcommand("kdist", "k-distinctness value and witness");
    kd->add_option("--k", args.k, "tuple order")->required();
    kd->add_option("--input", args.input, "comma separated symbols")->required();
    kd->add_option("--out", args.out, "output file (default stdout)");
    kd->callback([&args, &rc] {
        Input x = parse_input(args.input);
        bool value = eval_kdist(x, args.k);
        nlohmann::json j{{"value", value ? 1 : 0},
                         {"uniqueTuple", has_unique_ktuple(x, args.k)}};
        nlohmann::json w = nlohmann::json::array();
        for (int p : marked_positions(x, args.k)) w.push_back(p + 1);
        j["marked"] = w;
        emit(args.out, j);
        rc = kExitFeasible;
    });

    CLI::App* gc = oracle->add_subcommand("gc", "graph collision value and marked edge");
    gc->add_option("--graph", args.graph_path, "edge list file")->required();
    gc->add_option("--input", args.input, "comma separated bits")->required();
    gc->add_option("--out", args.out, "output file (default stdout)");
    gc->callback([&args, &rc] {
        SimpleGraph g = load_graph(args.graph_path);
        Input x = parse_input(args.input);
        if (static_cast<int>(x.size()) != g.n)
            throw CLI::ValidationError("--input", "length must match the graph order");
        nlohmann::json j{{"value", eval_graph_collision(g, x) ? 1 : 0}};
        if (auto e = marked_edge(g, x))
            j["markedEdge"] = {e->first + 1, e->second + 1};
        else
            j["markedEdge"] = nullptr;
        emit(args.out, j);
        rc = kExitFeasible;
    });

    CLI::App* alpha = oracle->add_subcommand("alpha", "independence number");
    alpha->add_option("--graph", args.graph_path, "edge list file")->required();
    alpha->add_option("--out", args.out, "output file (default stdout)");
    alpha->callback([&args, &rc] {
        SimpleGraph g = load_graph(args.graph_path);
        emit(args.out, nlohmann::json{{"independenceNumber", independence_number(g)}});
        rc = kExitFeasible;
    });

    CLI::App* cert1 = oracle->add_subcommand("cert1", "smallest forcing assignment");
    cert1->add_option("--k", args.k, "tuple order (equal-values mode)");
    cert1->add_option("--m", args.m, "alphabet size (defaults to the input length)");
    cert1->add_option("--graph", args.graph_path, "edge list file (collision mode)");
    cert1->add_option("--input", args.input, "comma separated symbols")->required();
    cert1->add_option("--out", args.out, "output file (default stdout)");
    cert1->callback([&args, &rc] {
        Input x = parse_input(args.input);
        ProblemSpec spec = args.graph_path.empty()
                               ? ProblemSpec::kdist(args.k)
                               : ProblemSpec::graph_collision(load_graph(args.graph_path), 0);
        emit(args.out,
             nlohmann::json{{"certificate1", certificate_complexity_1(spec, x, args.m)}});
        rc = kExitFeasible;
    });

    CLI::App* sched = oracle->add_subcommand("schedule", "self-reduction instance sizes");
    sched->add_option("--n", args.n, "input length")->required();
    sched->add_option("--k", args.k, "tuple order")->required();
    sched->add_option("--out", args.out, "output file (default stdout)");
    sched->callback([&args, &rc] {
        emit(args.out, nlohmann::json{{"sizes", reduction_schedule(args.n, args.k)}});
        rc = kExitFeasible;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual adversary certificates for k-distinctness and graph collision"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    BuildArgs build_args;
    VerifyArgs verify_args;
    OracleArgs oracle_args;
    int rc = kExitFeasible;

    setup_analyze(app, analyze_args, rc);
    setup_build(app, build_args, rc);
    setup_verify(app, verify_args, rc);
    setup_oracle(app, oracle_args, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}
