#include <iostream>

#include "CLI11.hpp"

#include "bellri/cli.hpp"

int main(int argc, char** argv) {
    bellri::cli::Command cmd;
    CLI::App app{"Bell-scenario correlator classification and checks"};
    app.add_option("verb", cmd.verb, "command to run")->required()->check(CLI::IsMember(bellri::cli::verbs()));
    app.add_option("--input", cmd.input, "input JSON path, or - for stdin");
    app.add_option("--tol", cmd.tol, "tolerance")->capture_default_str();
    app.add_option("--seed", cmd.seed, "random seed")->capture_default_str();
    app.add_option("--restarts", cmd.restarts, "optimizer restarts")->capture_default_str();
    app.add_option("--out", cmd.out, "write JSON here instead of stdout");
    double eta = 0.0;
    auto* eta_opt = app.add_option("--eta", eta, "optimize: pin Alice's eta to this value");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (*eta_opt) cmd.eta = eta;
    return bellri::cli::run(cmd, std::cin, std::cout, std::cerr);
}
