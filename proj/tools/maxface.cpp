#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include <maxface/verify.hpp>

namespace {

using namespace maxface;

// Accepts "1.5", "0.4+0.3i", "-2i", "i", and "(re,im)".
cplx parse_complex(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.front() == '(') {
        double re = 0, im = 0;
        if (std::sscanf(s.c_str(), "(%lf,%lf)", &re, &im) != 2)
            throw std::invalid_argument("bad complex literal: " + s);
        return {re, im};
    }
    if (s.back() != 'i' && s.back() != 'I') {
        size_t used = 0;
        double re = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad complex literal: " + s);
        return {re, 0.0};
    }
    s.pop_back();
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    if (split == std::string::npos) return {0.0, imag_part(s)};
    double re = std::stod(s.substr(0, split));
    return {re, imag_part(s.substr(split))};
}

catalog::ParamMap parse_params(const std::vector<std::string>& kvs) {
    catalog::ParamMap p;
    for (const std::string& kv : kvs) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("expected key=value, got: " + kv);
        p[kv.substr(0, eq)] = parse_complex(kv.substr(eq + 1));
    }
    return p;
}

WeierstrassData load_data(const std::string& name, const std::string& data_file,
                          const catalog::ParamMap& params, const QuadratureConfig& cfg) {
    if (!data_file.empty()) {
        std::ifstream in(data_file);
        if (!in) throw std::invalid_argument("cannot read " + data_file);
        nlohmann::json j;
        in >> j;
        return weierstrass_from_json(j);
    }
    if (name.empty()) throw std::invalid_argument("a surface name or --data file is required");
    return catalog::instantiate(name, params, cfg);
}

int cmd_list() {
    for (const auto& e : catalog::entries()) {
        std::cout << e.name;
        if (!e.params.empty()) {
            std::cout << " [";
            for (size_t i = 0; i < e.params.size(); ++i) std::cout << (i ? ", " : "") << e.params[i];
            std::cout << "]";
        }
        std::cout << "\n    " << e.summary << "\n";
    }
    return 0;
}

int cmd_describe(const std::string& name, const catalog::ParamMap& params,
                 const QuadratureConfig& cfg) {
    catalog::EntryInfo e = catalog::info(name);
    catalog::Expected exp = catalog::expected_info(name, params, cfg);
    WeierstrassData d = catalog::instantiate(name, params, cfg);
    nlohmann::json j;
    j["name"] = e.name;
    j["summary"] = e.summary;
    j["parameters"] = e.params;
    j["nonorientable"] = e.nonorientable;
    j["demo_only"] = e.demo_only;
    j["expected"] = {{"deg_g", exp.deg_g}, {"mu", exp.mu}, {"verdict", exp.verdict}};
    j["data"] = data_to_json(d);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_check(const std::string& name, const std::string& data_file,
              const catalog::ParamMap& params, const QuadratureConfig& cfg) {
    WeierstrassData d = load_data(name, data_file, params, cfg);
    CheckReport rep = run_check(d, cfg);
    nlohmann::json j = rep.json;
    bool matched = true;
    if (data_file.empty()) {
        catalog::Expected exp = catalog::expected_info(name, params, cfg);
        std::vector<int> mu;
        for (const auto& ej : j["ends"]) mu.push_back(ej["mu"].get<int>());
        std::sort(mu.begin(), mu.end());
        std::vector<int> emu = exp.mu;
        std::sort(emu.begin(), emu.end());
        bool deg_ok = j["deg_g"].get<int>() == exp.deg_g;
        bool mu_ok = mu == emu;
        bool verdict_ok = j["verdict"].get<std::string>() == exp.verdict;
        bool compat_ok = true;
        if (d.nonorientable()) {
            InvolutionCompat ic = involution_compatibility(d);
            j["involution_compat"] = {{"g_residual", ic.max_g_residual},
                                      {"phi3_residual", ic.max_phi3_residual},
                                      {"samples", ic.samples}};
            compat_ok = ic.max_g_residual <= 1e-6 && ic.max_phi3_residual <= 1e-6;
        }
        matched = deg_ok && mu_ok && verdict_ok && compat_ok;
        j["expected"] = {{"deg_g", exp.deg_g}, {"mu", exp.mu}, {"verdict", exp.verdict}};
        j["matches_expected"] = matched;
    } else {
        matched = rep.well_defined;
    }
    std::cout << j.dump(2) << "\n";
    return matched ? 0 : 1;
}

int cmd_periods(const std::string& name, const std::string& data_file,
                const catalog::ParamMap& params, const QuadratureConfig& cfg) {
    WeierstrassData d = load_data(name, data_file, params, cfg);
    PeriodReport rep = period_report(d, cfg);
    nlohmann::json j = rep.to_json();
    j["label"] = d.label;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_solve_klein(double tol, bool scan, const QuadratureConfig& cfg) {
    KleinSolveOptions opt;
    opt.tol = tol;
    RootResult res = solve_klein(opt, cfg);
    if (scan) {
        std::cout << "# sign-change brackets over (" << opt.lo << ", " << opt.hi << "), "
                  << opt.grid << " cells\n";
        std::cout << "# a, b, h(a), h(b)\n";
        char line[160];
        for (const auto& br : res.brackets) {
            std::snprintf(line, sizeof line, "%.10f, %.10f, %+.10e, %+.10e\n", br.first,
                          br.second, klein_h(br.first, cfg), klein_h(br.second, cfg));
            std::cout << line;
        }
    }
    std::cout.precision(15);
    for (size_t i = 0; i < res.roots.size(); ++i) {
        double r = res.roots[i];
        std::cout << "r" << i + 1 << " = " << r << "   |h| = " << std::abs(klein_h(r, cfg))
                  << "\n";
    }
    nlohmann::json j{{"r1", res.roots[0]}, {"r2", res.roots[1]}};
    std::ofstream out(catalog::root_cache_path());
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_plot_h(double lo, double hi, int samples, const std::string& out_path,
               const QuadratureConfig& cfg) {
    if (!(lo < hi) || (lo <= 0.0 && hi >= 0.0) || samples < 1) {
        std::cerr << "plot-h: range must be nonempty and exclude 0\n";
        return 2;
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "plot-h: cannot write " << out_path << "\n";
            return 2;
        }
        os = &file;
    }
    *os << "r,h,hprime\n";
    char line[160];
    for (int i = 0; i < samples; ++i) {
        double r = samples == 1 ? lo : lo + (hi - lo) * i / double(samples - 1);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r, klein_h(r, cfg),
                      klein_h_prime(r, cfg));
        *os << line;
    }
    return 0;
}

int cmd_mesh(const std::string& name, const std::string& data_file,
             const catalog::ParamMap& params, const std::string& grid, double rmin, double rmax,
             std::string out_path, bool singular, bool demo, const QuadratureConfig& cfg) {
    WeierstrassData d = load_data(name, data_file, params, cfg);
    MeshOptions opt;
    opt.rho_min = rmin;
    opt.rho_max = rmax;
    opt.with_singular = singular;
    if (!grid.empty()) {
        int n = 0, m = 0;
        char x = 0;
        if (std::sscanf(grid.c_str(), "%d%c%d", &n, &x, &m) != 3 || (x != 'x' && x != 'X') ||
            n < 4 || m < 4)
            throw std::invalid_argument("bad --grid, expected NxM with N,M >= 4: " + grid);
        opt.n_rho = n;
        opt.n_theta = m;
    }
    ImmersionEngine eng = ImmersionEngine::build(d, cfg, demo);
    SurfaceMesh mesh = eng.sample_mesh(opt);
    if (out_path.empty()) out_path = (d.label.empty() ? std::string("surface") : d.label) + ".obj";
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "mesh: cannot write " << out_path << "\n";
        return 2;
    }
    mesh.write_obj(out);
    std::cout << "wrote " << out_path << ": " << mesh.vertices.size() << " vertices, "
              << mesh.quads.size() << " faces";
    if (mesh.skipped_cells) std::cout << " (" << mesh.skipped_cells << " cells skipped)";
    std::cout << "\n";
    if (singular) {
        std::string side = out_path + ".singular.json";
        std::ofstream sout(side);
        sout << mesh.singular_json().dump(2) << "\n";
        std::cout << "wrote " << side << ": " << mesh.singular_polylines.size() << " polylines\n";
    }
    return 0;
}

int cmd_verify_all() {
    bool all = true;
    for (int i = 1; i <= int(verify::runners().size()); ++i) {
        verify::CriterionResult r = verify::run_one(i);
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.index << " (" << r.name
                  << "): " << r.detail << std::endl;
        all = all && r.pass;
    }
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximal-surface construction and verification toolkit"};
    app.require_subcommand(1);

    std::string name, data_file, out_path, grid, cache;
    std::vector<std::string> param_kvs;
    double tol = 1e-10, lo = 0.05, hi = 0.95, rmin = -2.5, rmax = 2.5;
    int samples = 100;
    bool scan = false, singular = false, demo = false;

    auto add_cache = [&](CLI::App* sub) {
        sub->add_option("--cache", cache, "root cache file (plain JSON)");
    };
    auto add_source = [&](CLI::App* sub, bool positional_required) {
        sub->add_option("name", name, "catalog entry name")->required(positional_required);
        sub->add_option("--data", data_file, "custom surface JSON file");
        sub->add_option("--param", param_kvs, "entry parameter key=value (repeatable)");
        add_cache(sub);
    };

    CLI::App* c_list = app.add_subcommand("list", "list catalog entries");
    CLI::App* c_desc = app.add_subcommand("describe", "entry details and serialized data");
    c_desc->add_option("name", name)->required();
    c_desc->add_option("--param", param_kvs, "entry parameter key=value (repeatable)");
    add_cache(c_desc);
    CLI::App* c_check = app.add_subcommand("check", "verify an entry against its expected record");
    add_source(c_check, false);
    c_check->add_option("--tol", tol, "quadrature relative tolerance");
    CLI::App* c_per = app.add_subcommand("periods", "period report as JSON");
    add_source(c_per, false);
    CLI::App* c_solve = app.add_subcommand("solve-klein", "find the two closing parameters");
    c_solve->add_option("--tol", tol, "root residual tolerance");
    c_solve->add_flag("--scan", scan, "print the bracketing table");
    add_cache(c_solve);
    CLI::App* c_plot = app.add_subcommand("plot-h", "sample the period function to CSV");
    c_plot->add_option("--min", lo, "range start")->required();
    c_plot->add_option("--max", hi, "range end")->required();
    c_plot->add_option("--samples", samples, "sample count");
    c_plot->add_option("--out", out_path, "output file (default stdout)");
    CLI::App* c_mesh = app.add_subcommand("mesh", "export an OBJ mesh");
    add_source(c_mesh, false);
    c_mesh->add_option("--grid", grid, "rho x theta resolution, e.g. 64x64");
    c_mesh->add_option("--rmin", rmin, "log-radius lower bound");
    c_mesh->add_option("--rmax", rmax, "log-radius upper bound");
    c_mesh->add_option("--out", out_path, "OBJ output path");
    c_mesh->add_flag("--singular", singular, "also write the singular-set sidecar JSON");
    c_mesh->add_flag("--demo", demo, "build despite obstructions or branch points");
    CLI::App* c_verify = app.add_subcommand("verify-all", "run the full acceptance suite");
    add_cache(c_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!cache.empty()) catalog::root_cache_path() = cache;
    QuadratureConfig cfg;
    if (c_check->parsed() && c_check->count("--tol")) {
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
    }

    try {
        catalog::ParamMap params = parse_params(param_kvs);
        if (c_list->parsed()) return cmd_list();
        if (c_desc->parsed()) return cmd_describe(name, params, cfg);
        if (c_check->parsed()) return cmd_check(name, data_file, params, cfg);
        if (c_per->parsed()) return cmd_periods(name, data_file, params, cfg);
        if (c_solve->parsed()) return cmd_solve_klein(tol, scan, cfg);
        if (c_plot->parsed()) return cmd_plot_h(lo, hi, samples, out_path, cfg);
        if (c_mesh->parsed())
            return cmd_mesh(name, data_file, params, grid, rmin, rmax, out_path, singular, demo,
                            cfg);
        if (c_verify->parsed()) return cmd_verify_all();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
