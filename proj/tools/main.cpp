#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "modrad/dissymmetrization.hpp"
#include "modrad/grid.hpp"
#include "modrad/lab.hpp"
#include "modrad/modulus.hpp"

using nlohmann::json;
using namespace modrad;

namespace {

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << report.dump(2) << "\n";
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
}

Point point_from(const json& j) { return Point(j.get<std::vector<double>>()); }

LabOptions lab_options(const json& cfg) {
    LabOptions opt;
    if (cfg.contains("grid_h")) opt.grid_h = cfg.at("grid_h").get<double>();
    if (cfg.contains("seed")) opt.seed = cfg.at("seed").get<int>();
    if (cfg.contains("pde_crosscheck")) opt.pde_crosscheck = cfg.at("pde_crosscheck").get<bool>();
    if (cfg.contains("pde_box_halfwidth"))
        opt.pde_box_halfwidth = cfg.at("pde_box_halfwidth").get<double>();
    if (cfg.contains("outer_cap_factor"))
        opt.outer_cap_factor = cfg.at("outer_cap_factor").get<double>();
    return opt;
}

int run_radius(const std::string& config_path, const std::string& out_path) {
    json cfg = load_config(config_path);
    PExponent pe(cfg.at("dimension").get<int>(), cfg.at("p").get<double>());
    Domain D = Domain::from_json(cfg.at("domain"));
    Point a = point_from(cfg.at("a"));
    RadiusReport r = compute_radius(D, a, pe, lab_options(cfg));
    json rep;
    rep["schema"] = "modrad.radius.v1";
    rep["config"] = cfg;
    rep["value"] = r.value;
    rep["error"] = r.error;
    rep["source"] = r.source;
    if (!r.cross_source.empty()) {
        rep["cross_value"] = r.cross_value;
        rep["cross_error"] = r.cross_error;
        rep["cross_source"] = r.cross_source;
    }
    emit(rep, out_path);
    return 0;
}

int run_modulus(const std::string& config_path, const std::string& out_path,
                const std::string& grid_dump) {
    json cfg = load_config(config_path);
    const int n = cfg.at("dimension").get<int>();
    const double p = cfg.at("p").get<double>();
    const double r1 = cfg.at("r1").get<double>();
    const double r2 = cfg.at("r2").get<double>();
    const double h = cfg.value("grid_h", 1.0 / 32);

    // curve family joining the two boundary spheres of the ring r1 < |x| < r2
    GridGraph g;
    const int n_rad = std::max(2, static_cast<int>(std::lround((r2 - r1) / h)));
    std::vector<double> levels;
    for (int i = 0; i <= n_rad; ++i) levels.push_back(r1 + (r2 - r1) * i / n_rad);
    if (n == 2) {
        const int n_theta = cfg.value("n_theta", 256);
        g = make_cylindrical_grid(2, levels, n_theta, {});
    } else if (n == 3) {
        const int n_lat = cfg.value("n_lat", 32);
        g = make_spherical_grid(Point::zero(3), levels, n_lat, cfg.value("n_lon", 2 * n_lat), {});
    } else {
        throw std::runtime_error("modulus subcommand supports n = 2 or 3");
    }
    tag_sphere(g, "inner", Point::zero(n), r1);
    tag_sphere(g, "outer", Point::zero(n), r2);
    ConnectorFamily fam;
    fam.source = g.tags.at("inner");
    fam.sink = g.tags.at("outer");
    ModulusResult res = solve_modulus(g, fam, p, {});
    json rep;
    rep["schema"] = "modrad.modulus.v1";
    rep["config"] = cfg;
    rep["value"] = res.value;
    rep["lower_bound"] = res.lower_bound;
    rep["certified_gap"] = res.certified_gap;
    rep["iterations"] = res.iterations;
    rep["analytic"] = annulus_modulus_analytic(r1, r2, PExponent(n, p));
    emit(rep, out_path);
    if (!grid_dump.empty()) {
        std::ofstream out(grid_dump);
        out << g.to_json(&res.density).dump() << "\n";
    }
    return 0;
}

int run_verify(const std::string& what, const std::string& config_path,
               const std::string& out_path) {
    json cfg = load_config(config_path);
    DecompositionReport rep;
    if (what == "theorem1")
        rep = verify_theorem1(cfg);
    else if (what == "theorem2")
        rep = verify_theorem2(cfg);
    else if (what == "lavrentiev")
        rep = verify_lavrentiev(cfg);
    else if (what == "kufarev")
        rep = verify_kufarev(cfg);
    else if (what == "corollary3")
        rep = verify_corollary3(cfg);
    else
        throw std::runtime_error("unknown verification target: " + what);
    emit(rep.to_json(), out_path);
    return rep.exit_code();
}

int run_figure(const std::string& which, const std::string& config_path,
               const std::string& out_path) {
    json cfg = load_config(config_path);
    std::string csv;
    if (which == "figure1-section") {
        csv = figure1_section_csv(point_from(cfg.at("a1")), point_from(cfg.at("a2")),
                                  cfg.at("dimension").get<int>(), cfg.value("window", 1.1),
                                  cfg.value("samples", 400));
    } else if (which == "config-section") {
        csv = config_section_csv(Domain::from_json(cfg.at("domain")), cfg.value("window", 2.0),
                                 cfg.value("samples", 400), cfg.value("label", "boundary"));
    } else {
        throw std::runtime_error("unknown figure: " + which);
    }
    emit_text(csv, out_path);
    return 0;
}

int run_structure(int m, std::vector<double> targets, const std::string& out_path) {
    SymmetricStructure s = build_structure(m, targets);
    StructureCheck chk = verify_structure(s);
    json rep;
    rep["schema"] = "modrad.structure.v1";
    rep["structure"] = structure_to_json(s);
    rep["ok"] = chk.ok;
    if (!chk.ok) rep["failure"] = chk.failure;
    emit(rep, out_path);
    return chk.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-harmonic radius and p-modulus laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_path, grid_dump, verify_what, figure_what;
    int m = 1;
    std::vector<double> targets;

    CLI::App* radius = app.add_subcommand("radius", "estimate a p-harmonic radius");
    radius->add_option("--config", config_path, "JSON config")->required();
    radius->add_option("--out", out_path, "report path (default stdout)");

    CLI::App* modulus = app.add_subcommand("modulus", "discrete p-modulus of a ring family");
    modulus->add_option("--config", config_path, "JSON config")->required();
    modulus->add_option("--out", out_path, "report path (default stdout)");
    modulus->add_option("--dump-grid", grid_dump, "write the grid + density as JSON");

    CLI::App* verify = app.add_subcommand("verify", "check a decomposition inequality");
    verify->add_option("target", verify_what,
                       "theorem1|theorem2|lavrentiev|kufarev|corollary3")->required();
    verify->add_option("--config", config_path, "JSON config")->required();
    verify->add_option("--out", out_path, "report path (default stdout)");

    CLI::App* figure = app.add_subcommand("figure", "emit CSV polylines");
    figure->add_option("target", figure_what, "figure1-section|config-section")->required();
    figure->add_option("--config", config_path, "JSON config")->required();
    figure->add_option("--out", out_path, "CSV path (default stdout)");

    CLI::App* structure = app.add_subcommand("structure", "build and check a rotation structure");
    structure->add_option("--m", m, "order of symmetry")->required();
    structure->add_option("--targets", targets, "target angles (radians)")->required();
    structure->add_option("--out", out_path, "report path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (radius->parsed()) return run_radius(config_path, out_path);
        if (modulus->parsed()) return run_modulus(config_path, out_path, grid_dump);
        if (verify->parsed()) return run_verify(verify_what, config_path, out_path);
        if (figure->parsed()) return run_figure(figure_what, config_path, out_path);
        if (structure->parsed()) return run_structure(m, targets, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
