#include "pseudometric/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "pseudometric/closed_forms.hpp"
#include "pseudometric/errors.hpp"
#include "pseudometric/kernel_io.hpp"
#include "pseudometric/spectral.hpp"

namespace pseudometric::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " from '" + s + "'");
    }
}

PhysConstants gauge_from_string(const std::string& g) {
    if (g == "natural") return PhysConstants::natural();
    if (g == "bender-tan") return PhysConstants::bender_tan();
    throw ConfigError("unknown gauge '" + g + "' (expected natural or bender-tan)");
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return hex64(fnv1a(ss.str()));
}

void ensure_dir(const std::string& d) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw ConfigError("cannot create output directory " + d + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

} // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig build_config(const Options& o) {
    RunConfig rc;
    rc.out = o.out;
    nlohmann::json extra = nlohmann::json::object();

    if (!o.potential_path.empty() && !o.model.empty())
        throw ConfigError("--model and --potential are mutually exclusive");
    if (!o.potential_path.empty()) {
        std::ifstream in(o.potential_path);
        if (!in) throw ConfigError("cannot open potential file " + o.potential_path);
        try {
            in >> extra;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("potential file " + o.potential_path + " is not valid JSON: " + e.what());
        }
        rc.potential = potential_from_json(extra);
        rc.model = "custom";
        rc.L = rc.potential.domain.L;
    } else {
        if (o.model.empty()) throw ConfigError("either --model or --potential is required");
        const ModelName m = model_from_string(o.model);
        rc.model = to_string(m);
        rc.zeta = o.zeta;
        const std::string gauge = !o.gauge.empty() ? o.gauge : (m == ModelName::SquareWell ? "bender-tan" : "natural");
        const PhysConstants k = gauge_from_string(gauge);
        switch (m) {
        case ModelName::SquareWell:
            rc.L = std::numbers::pi;
            rc.potential = models::square_well(o.zeta, rc.L, k);
            break;
        case ModelName::Scattering:
            rc.L = 1.0;
            rc.potential = models::scattering(o.zeta, rc.L, k);
            break;
        case ModelName::Deltas: {
            if (o.deltas.empty()) throw ConfigError("--deltas is required for the deltas model");
            std::vector<DeltaTerm> terms;
            for (const auto& item : split(o.deltas, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw ConfigError("delta term '" + item + "' is not z:a");
                const double z = parse_double(item.substr(0, colon), "delta coupling");
                const double a = parse_double(item.substr(colon + 1), "delta location");
                terms.push_back({a, z / k.c0()});
            }
            rc.potential = models::deltas(std::move(terms), k);
            break;
        }
        }
    }

    int n = o.n.value_or(129);
    double extent = o.extent.value_or(0.0);
    if (extra.contains("grid")) {
        const auto& g = extra.at("grid");
        if (!o.n) n = g.value("n", n);
        if (!o.extent && g.contains("X")) extent = g.at("X").get<double>();
    }
    if (!rc.potential.domain.is_box() && !(extent > 0.0)) {
        if (rc.model == "scattering")
            extent = 2.0 * rc.L;
        else
            extent = 4.0;
    }
    rc.grid = Grid::for_domain(rc.potential.domain, n, extent);

    rc.series = KConfig::for_potential(rc.potential);
    if (extra.contains("series")) kconfig_from_json(extra.at("series"), rc.series);
    if (o.order) rc.series.max_order = *o.order;
    rc.series.validate();

    if (extra.contains("tolerances")) tolerances_from_json(extra.at("tolerances"), rc.tolerances);
    if (extra.contains("oracle") && extra.at("oracle").contains("n_modes"))
        rc.n_modes = extra.at("oracle").at("n_modes").get<int>();

    if (!o.seed_path.empty() && o.preset_seed != "none")
        throw ConfigError("--seed and --preset-seed are mutually exclusive");
    std::string seed_id = "none";
    if (!o.seed_path.empty()) {
        rc.seed = seeds::from_csv(o.seed_path);
        rc.seed_name = o.seed_path;
        seed_id = "file:" + file_hash(o.seed_path);
    } else if (o.preset_seed == "bender-tan") {
        rc.seed = seeds::bender_tan().scaled(rc.zeta);
        rc.seed_name = seed_id = "bender-tan";
    } else if (o.preset_seed == "jmp-2005") {
        if (!(rc.L > 0.0)) throw ConfigError("the jmp-2005 seed needs a model width L");
        rc.seed = seeds::jmp_2005(rc.L, rc.potential.constants).scaled(rc.zeta);
        rc.seed_name = seed_id = "jmp-2005";
    } else if (o.preset_seed != "none") {
        throw ConfigError("unknown preset seed '" + o.preset_seed + "' (expected none, bender-tan or jmp-2005)");
    }
    check_seed(rc.seed, rc.grid);

    rc.checks = split(o.checks.empty() ? std::string("kg,hermiticity") : o.checks, ',');

    rc.canonical = {{"model", rc.model},
                    {"zeta", rc.zeta},
                    {"L", rc.L},
                    {"potential", potential_to_json(rc.potential)},
                    {"grid", {{"X", rc.grid.X()}, {"n", rc.grid.n()}}},
                    {"series", kconfig_to_json(rc.series)},
                    {"tolerances", tolerances_to_json(rc.tolerances)},
                    {"seed", seed_id},
                    {"checks", rc.checks}};
    if (rc.n_modes) rc.canonical["oracle"] = {{"n_modes", *rc.n_modes}};
    return rc;
}

int cmd_compute(const RunConfig& cfg) {
    ensure_dir(cfg.out);
    const SeriesState st = neumann_series(cfg.seed, cfg.potential, cfg.series, cfg.grid);
    const fs::path dir(cfg.out);
    std::vector<std::string> files{"kernel.csv"};
    write_kernel_csv(st.partial_sum, (dir / "kernel.csv").string());
    for (std::size_t l = 0; l < st.iterates.size(); ++l) {
        const std::string name = "iter_" + std::to_string(l) + ".csv";
        write_kernel_csv(st.iterates[l], (dir / name).string());
        files.push_back(name);
    }
    {
        std::FILE* f = std::fopen((dir / "sup_norms.csv").string().c_str(), "w");
        if (!f) throw ConfigError("cannot write sup_norms.csv");
        std::fprintf(f, "order,sup_norm\n");
        for (std::size_t l = 0; l < st.sup_norms.size(); ++l) std::fprintf(f, "%zu,%.12e\n", l, st.sup_norms[l]);
        std::fclose(f);
        files.push_back("sup_norms.csv");
    }
    write_kernel_pgm(st.partial_sum, (dir / "kernel.pgm").string());
    files.push_back("kernel.pgm");

    nlohmann::json man;
    man["command"] = "compute";
    man["config"] = cfg.canonical;
    man["config_hash"] = hex64(fnv1a(cfg.canonical.dump()));
    man["kg_tolerance"] = cfg.tolerances.kg_tolerance(cfg.potential, cfg.grid);
    man["orders_computed"] = static_cast<int>(st.iterates.size()) - 1;
    man["converged"] = st.converged;
    man["divergence_warning"] = st.divergence_warning;
    man["truncated_targets"] = st.truncated_targets;
    man["warnings"] = st.warnings;
    man["files"] = files;
    write_text((dir / "manifest.json").string(), man.dump(2) + "\n");
    for (const auto& w : st.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& kernel_path) {
    if (kernel_path.empty()) throw ConfigError("verify needs a kernel CSV path");
    const Kernel k = read_kernel_csv(kernel_path);
    if (cfg.potential.domain.is_box() && std::abs(k.grid.X() - 0.5 * cfg.potential.domain.L) > 1e-9)
        throw ConfigError("kernel grid half-width does not match the box");
    ensure_dir(cfg.out);
    std::ofstream log((fs::path(cfg.out) / "report.jsonl").string());
    bool all_pass = true;
    const ActiveBlock block = ActiveBlock::for_domain(cfg.potential.domain, k.grid);
    for (const auto& c : cfg.checks) {
        CheckReport r;
        if (c == "kg") {
            r = kg_residual(k, cfg.potential, cfg.tolerances);
        } else if (c == "hermiticity") {
            r = hermiticity_check(k, cfg.tolerances.hermiticity);
        } else if (c == "positivity") {
            try {
                r = positivity_check(k, block, cfg.tolerances.positivity);
            } catch (const ConstraintError& e) {
                r.check = "positivity";
                r.residual = e.violation();
                r.pass = false;
                r.meta = {{"error", e.what()}};
            }
        } else if (c == "invertibility") {
            r = invertibility_check(k, block, cfg.tolerances.invertibility);
        } else if (c == "pseudo_hermiticity") {
            const auto dh = discretize(cfg.potential, k.grid);
            r = pseudo_hermiticity_residual(k, dh, cfg.tolerances.pseudo_hermiticity);
        } else {
            throw ConfigError("unknown check '" + c +
                              "' (expected kg, hermiticity, positivity, invertibility, pseudo_hermiticity)");
        }
        r.meta["model"] = cfg.model;
        const std::string line = r.to_json().dump();
        std::cout << line << "\n";
        log << line << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_oracle(const RunConfig& cfg, const std::string& cross_check_path) {
    ensure_dir(cfg.out);
    const fs::path dir(cfg.out);
    const auto dh = discretize(cfg.potential, cfg.grid);
    for (const auto& w : dh.warnings) std::cerr << "warning: " << w << "\n";
    const auto sys = biorthonormalize(dh);
    write_spectrum_csv(sys, (dir / "spectrum.csv").string());
    const int modes = cfg.n_modes.value_or(sys.size());
    const Kernel metric = spectral_metric(sys, dh, modes);
    write_kernel_csv(metric, (dir / "metric.csv").string());

    double worst_ratio = 0.0;
    const int low = std::min(10, sys.size());
    for (int k = 0; k < low; ++k)
        worst_ratio = std::max(worst_ratio, std::abs(sys.energies(k).imag()) / std::abs(sys.energies(k).real()));

    std::vector<CheckReport> reports;
    reports.push_back(hermiticity_check(metric, cfg.tolerances.hermiticity));
    reports.push_back(pseudo_hermiticity_residual(metric, dh, cfg.tolerances.pseudo_hermiticity));
    bool cross_pass = true;
    if (!cross_check_path.empty()) {
        const Kernel series = read_kernel_csv(cross_check_path);
        if (series.grid != dh.grid) throw ConfigError("cross-check kernel grid does not match the oracle grid");
        auto r = homogeneous_difference(series, metric, dh, cfg.tolerances.cross_tolerance(cfg.potential, dh.grid));
        cross_pass = r.pass;
        reports.push_back(r);
    }
    std::ofstream log((dir / "oracle.jsonl").string());
    for (auto& r : reports) {
        r.meta["model"] = cfg.model;
        r.meta["n_modes"] = modes;
        const std::string line = r.to_json().dump();
        std::cout << line << "\n";
        log << line << "\n";
    }

    nlohmann::json man;
    man["command"] = "oracle";
    man["config"] = cfg.canonical;
    man["config_hash"] = hex64(fnv1a(cfg.canonical.dump()));
    man["n_modes"] = modes;
    man["spectrum_all_real"] = worst_ratio < 1e-6;
    man["max_imag_over_real_lowest10"] = worst_ratio;
    man["biorthonormality_defect"] = sys.biorthonormality_defect();
    man["condition"] = sys.condition;
    man["warnings"] = dh.warnings;
    write_text((dir / "manifest.json").string(), man.dump(2) + "\n");
    return cross_pass ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"Pseudo-metric kernels for one-dimensional non-Hermitian Hamiltonians"};
    app.require_subcommand(1);
    Options o;
    int order = 1, n = 129;
    double extent = 0.0;
    std::vector<std::pair<CLI::Option*, CLI::Option*>> opt_ptrs;
    std::vector<CLI::Option*> extent_opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", o.model, "square-well, scattering or deltas");
        sub->add_option("--potential", o.potential_path, "potential JSON (may carry series/grid/tolerances/oracle)");
        sub->add_option("--zeta", o.zeta, "coupling of the square-well or scattering model");
        sub->add_option("--deltas", o.deltas, "delta terms z:a[,z:a...] with z = 2 m zeta / hbar^2");
        sub->add_option("--gauge", o.gauge, "natural or bender-tan");
        auto* po = sub->add_option("--order", order, "highest series order");
        auto* pn = sub->add_option("--n", n, "grid nodes per axis (odd, >= 33)");
        extent_opts.push_back(sub->add_option("--extent", extent, "grid half-width for full-line models"));
        opt_ptrs.emplace_back(po, pn);
        sub->add_option("--seed", o.seed_path, "tabulated seed CSV");
        sub->add_option("--preset-seed", o.preset_seed, "none, bender-tan or jmp-2005");
        sub->add_option("--checks", o.checks, "comma list of kg,hermiticity,positivity,invertibility,pseudo_hermiticity");
        sub->add_option("--cross-check", o.cross_check, "series kernel CSV to compare with the spectral metric");
        sub->add_option("--out", o.out, "output directory");
    };
    auto* compute = app.add_subcommand("compute", "build the series kernel");
    auto* verify = app.add_subcommand("verify", "run residual checks on a kernel CSV");
    auto* oracle = app.add_subcommand("oracle", "spectral metric from the discretized Hamiltonian");
    add_common(compute);
    add_common(verify);
    add_common(oracle);
    verify->add_option("kernel", o.kernel_path, "kernel CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto [po, pn] : opt_ptrs) {
        if (po->count()) o.order = order;
        if (pn->count()) o.n = n;
    }
    for (auto* pe : extent_opts)
        if (pe->count()) o.extent = extent;

    try {
        const RunConfig cfg = build_config(o);
        if (compute->parsed()) return cmd_compute(cfg);
        if (verify->parsed()) return cmd_verify(cfg, o.kernel_path);
        return cmd_oracle(cfg, o.cross_check);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace pseudometric::cli
