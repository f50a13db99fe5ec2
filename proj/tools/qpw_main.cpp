// qpw command-line front end. Every subcommand prints a JSON document on
// stdout; diagnostics go to stderr. Exit codes: 0 ok, 1 domain or I/O
// error, 2 usage error.

#include "http_service.hpp"
#include "qpw/qpw.h"

#include "CLI11.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure {
    int code;
    std::string message;
};

std::string read_input(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw Failure{kExitDomain, "cannot read " + path};
    ss << in.rdbuf();
    return ss.str();
}

// Prints (or writes) a C API result, or turns the status into a Failure.
void finish(qpw_status s, char** out, const std::string& output_path = {}) {
    if (s != QPW_OK) throw Failure{kExitDomain, std::string(qpw_status_name(s)) + ": " + qpw_last_error()};
    std::string text = *out;
    qpw_string_free(*out);
    *out = nullptr;
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(output_path);
    f << text;
    if (!f) throw Failure{kExitDomain, "cannot write " + output_path};
}

qpw_http::Service* running = nullptr;

void on_signal(int) {
    if (running) running->stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for quivers with potentials"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qpw_version());

    std::string input, second;
    int k = 0;

    auto* mutate = app.add_subcommand("mutate", "Mutate a quiver at vertex k");
    mutate->add_option("-k", k, "vertex (1-based)")->required();
    mutate->add_option("quiver", input, "quiver JSON file, - for stdin")->required();

    auto* classify = app.add_subcommand("classify", "Classify the mutation type of a quiver");
    classify->add_option("quiver", input, "quiver JSON file, - for stdin")->required();

    auto* qp_mutate = app.add_subcommand("qp-mutate", "Mutate a QP at vertex k and reduce");
    qp_mutate->add_option("-k", k, "vertex (1-based)")->required();
    qp_mutate->add_option("qp", input, "QP JSON file, - for stdin")->required();

    int trunc = 0;
    auto* jacobian = app.add_subcommand("jacobian", "Truncated Jacobian algebra dimensions");
    jacobian->add_option("qp", input, "QP JSON file, - for stdin")->required();
    jacobian->add_option("--trunc", trunc, "path-length truncation (default: from the file)")->check(CLI::PositiveNumber);

    std::vector<int> theta;
    auto* stable = app.add_subcommand("stable", "Check a representation for theta-stability");
    stable->add_option("--theta", theta, "stability parameter, comma separated")->required()->delimiter(',');
    stable->add_option("rep", input, "representation JSON file")->required();
    stable->add_option("qp", second, "QP JSON file")->required();

    std::vector<int> g;
    int samples = 64;
    std::uint64_t seed = 7;
    auto* einv = app.add_subcommand("einv", "Rigid/tame probe of a g-vector");
    einv->add_option("qp", input, "QP JSON file, - for stdin")->required();
    einv->add_option("--g", g, "g-vector, comma separated")->required()->delimiter(',');
    einv->add_option("--samples", samples, "random samples")->check(CLI::PositiveNumber);
    einv->add_option("--seed", seed, "random seed");

    qpw_witness_options wopt;
    qpw_witness_options_init(&wopt);
    std::string output;
    bool progress = false;
    auto* witness = app.add_subcommand("witness", "Build a stable-family witness certificate");
    witness->add_option("qp", input, "QP JSON file, - for stdin")->required();
    witness->add_option("-k", wopt.k, "family size")->check(CLI::Range(2, 1000));
    witness->add_option("-o,--output", output, "write the certificate here instead of stdout");
    witness->add_option("--seed", wopt.seed, "seed for the non-degeneracy probe and sampling");
    witness->add_option("--probe-depth", wopt.probe_depth, "mutation sequence length of the probe");
    witness->add_option("--probe-trials", wopt.probe_trials, "number of probe sequences");
    witness->add_flag("--progress", progress, "stream progress lines to stderr");

    int port = 7878;
    std::string host = "127.0.0.1";
    std::string state_dir;
    if (const char* env = std::getenv("QPW_STATE_DIR")) state_dir = env;
    auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "address to bind");
    serve->add_option("--state-dir", state_dir, "persist sessions here (default: $QPW_STATE_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        char* out = nullptr;
        if (*mutate) {
            finish(qpw_mutate_json(read_input(input).c_str(), k, &out), &out);
        } else if (*classify) {
            finish(qpw_classify_json(read_input(input).c_str(), &out), &out);
        } else if (*qp_mutate) {
            finish(qpw_qp_mutate_json(read_input(input).c_str(), k, &out), &out);
        } else if (*jacobian) {
            finish(qpw_jacobian_json(read_input(input).c_str(), trunc, &out), &out);
        } else if (*stable) {
            const std::string rep = read_input(input), qp = read_input(second);
            finish(qpw_stable_json(rep.c_str(), qp.c_str(), theta.data(), theta.size(), &out), &out);
        } else if (*einv) {
            finish(qpw_einv_json(read_input(input).c_str(), g.data(), g.size(), samples, seed, &out), &out);
        } else if (*witness) {
            if (progress) {
                wopt.progress = [](const char* line, void*) { std::cerr << "progress: " << line << std::endl; };
            }
            finish(qpw_witness_json(read_input(input).c_str(), &wopt, &out), &out, output);
        } else if (*serve) {
            qpw_http::Service service(state_dir);
            const int bound = service.bind(host, port);
            if (bound < 0) throw Failure{kExitDomain, "cannot bind " + host + ":" + std::to_string(port)};
            running = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << host << ":" << bound << std::endl;
            const bool ok = service.run();
            running = nullptr;
            return ok ? 0 : kExitDomain;
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << std::endl;
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitDomain;
    }
    return 0;
}
