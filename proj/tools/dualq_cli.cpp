#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dualq/cli.hpp>

using namespace dualq;

int main(int argc, char** argv) {
    CLI::App app{"Dual quermassintegrals, realizability and dual Steiner roots"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out, format;
    std::optional<long long> seed;
    std::optional<int> res;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--res", res, "grid resolution for every dimension");
    app.add_option("--out", out, "output path (file prefix for realize, directory for cone)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> files;
    std::vector<double> indices;
    int dim = 0;
    std::optional<int> samples;

    auto* compute = app.add_subcommand("compute", "dual quermassintegrals of a body pair");
    compute->add_option("bodies", files, "K.json L.json")->required()->expected(2);
    compute->add_option("-i,--indices", indices, "real indices (default 0..n)")->delimiter(',');

    auto* check = app.add_subcommand("check", "realizability verdict for a tuple");
    check->add_option("tuple", files, "tuple.json")->required()->expected(1);

    auto* realize = app.add_subcommand("realize", "synthesize a witness pair for a tuple");
    realize->add_option("tuple", files, "tuple.json")->required()->expected(1);

    auto* roots = app.add_subcommand("roots", "roots of a dual Steiner polynomial");
    roots->add_option("input", files, "tuple.json, or K.json L.json")->required()->expected(1, 2);

    auto* cone = app.add_subcommand("cone", "directional membership map of the root cone");
    cone->add_option("dim", dim, "dimension")->required();
    cone->add_option("samples", samples, "number of angles in (0, pi]");

    auto* verify = app.add_subcommand("verify", "inequality suites for a body pair");
    verify->add_option("bodies", files, "K.json L.json")->required()->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::InputError;
    }

    cli::Result r;
    try {
        RunConfig cfg;
        if (!config_path.empty()) read_config_file(cfg, config_path);
        if (seed) set_option(cfg, "seed", std::to_string(*seed));
        if (res) set_option(cfg, "res", std::to_string(*res));
        if (!out.empty()) cfg.out = out;
        if (!format.empty()) cfg.format = format;

        if (*compute)
            r = cli::cmd_compute(files[0], files[1], indices, cfg, std::cerr);
        else if (*check)
            r = cli::cmd_check(files[0], cfg, std::cerr);
        else if (*realize)
            r = cli::cmd_realize(files[0], cfg, std::cerr);
        else if (*roots)
            r = cli::cmd_roots(files, cfg, std::cerr);
        else if (*cone)
            r = cli::cmd_cone(dim, samples.value_or(cfg.samples), cfg, std::cerr);
        else
            r = cli::cmd_verify(files[0], files[1], cfg, std::cerr);
    } catch (const RefusalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cout << cli::dump(to_json(e.verdict()));
        return cli::Negative;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return cli::InvariantFailure;
    }
    std::cout << r.out;
    return r.code;
}
