#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hybrid4/experiments.hpp"
#include "hybrid4/mesh.hpp"
#include "hybrid4/quadrature.hpp"
#include "hybrid4/rulesearch.hpp"

#ifndef HYBRID4_RULES_DIR
#define HYBRID4_RULES_DIR "rules"
#endif

using namespace hybrid4;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::UnknownRule, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_verify_rule(const std::string& path, int strength, double tol)
{
    const auto rule = load_rule(read_file(path));
    const int p = strength >= 0 ? strength : rule.strength();
    const auto rep = verify_strength(rule, p, tol);
    bool interior = true;
    for (const auto& x : rule.points())
        interior = interior && strictly_inside_pyramid(x);
    const bool pass = rep.pass && interior;
    std::printf("file,strength,points,weight_sum_error,max_residual,worst_mode,interior,result\n");
    std::printf("%s,%d,%zu,%.3e,%.3e,%d.%d.%d.%d,%d,%s\n", path.c_str(), p, rule.size(), rep.weight_sum_error,
                rep.max_residual, rep.worst_mode.i, rep.worst_mode.j, rep.worst_mode.k, rep.worst_mode.q,
                interior ? 1 : 0, pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int cmd_search_rule(SearchConfig cfg, const std::string& out, const std::string& log_path)
{
    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path);
        log << "points,decomposition,restart,residual,status\n";
    }
    auto outcome = search(cfg, [&](const SearchLogEntry& e) {
        if (log.is_open())
            log << e.points << ',' << e.decomposition << ',' << e.restart << ',' << format_real(e.residual) << ','
                << to_string(e.status) << std::endl;
    });
    std::printf("strength,points,attempts,budget_exhausted,result\n");
    if (outcome.rules.empty()) {
        std::printf("%d,,%zu,%d,FAIL\n", cfg.strength, outcome.log.size(), outcome.budget_exhausted ? 1 : 0);
        return 1;
    }
    const auto& rule = outcome.rules.front();
    std::printf("%d,%zu,%zu,%d,PASS\n", cfg.strength, rule.size(), outcome.log.size(),
                outcome.budget_exhausted ? 1 : 0);
    const std::string text = save_rule(rule);
    if (out.empty())
        std::cout << text;
    else
        std::ofstream(out) << text;
    return 0;
}

std::function<bool(const Point4&)> region_predicate(const std::string& split)
{
    if (split == "all")
        return [](const Point4&) { return true; };
    if (split == "none")
        return [](const Point4&) { return false; };
    if (split == "half")
        return [](const Point4& c) { return c[0] < 0.5; };
    throw Error(ErrorCode::InvalidParams, "split must be all, half or none");
}

struct MeshArgs {
    std::string in;
    int m = 2;
    int levels = 1;
    std::string split = "half";
};

/// Either reads a mesh file (then refines it `levels` times) or builds the
/// unit-box pipeline: M^4 grid, B on the chosen region, then H^levels.
Mesh obtain_mesh(const MeshArgs& a)
{
    if (!a.in.empty()) {
        std::ifstream f(a.in);
        if (!f)
            throw Error(ErrorCode::ParseError, "cannot open " + a.in);
        return refine_pipeline(read_mesh(f), a.levels);
    }
    return refine_pipeline(hybridize(mesh_canonical_box(a.m), region_predicate(a.split)), a.levels);
}

int cmd_refine(const MeshArgs& a, const std::string& out)
{
    const Mesh mesh = obtain_mesh(a);
    std::printf("tesseracts,pyramids,bipentatopes,vertices,volume\n");
    std::printf("%zu,%zu,%zu,%zu,%.17g\n", mesh.count(ElementKind::Tesseract), mesh.count(ElementKind::CubicPyramid),
                mesh.count(ElementKind::Bipentatope), mesh.pool.size(), mesh.volume());
    if (!out.empty()) {
        std::ofstream f(out);
        write_mesh(f, mesh);
    }
    return 0;
}

int cmd_audit(const MeshArgs& a, bool unit_box)
{
    Mesh mesh = obtain_mesh(a);
    if (unit_box)
        mesh.domain = Box{{0, 0, 0, 0}, {1, 1, 1, 1}};
    const auto r = conformity_audit(mesh);
    std::printf("elements,pairs,bad_pairs,hanging,overfull_facets,open_facets,degenerate,volume,result\n");
    std::printf("%zu,%zu,%zu,%zu,%zu,%zu,%zu,%.17g,%s\n", r.elements, r.pairs, r.bad_pairs, r.hanging,
                r.overfull_facets, r.open_facets, r.degenerate, r.volume, r.pass() ? "PASS" : "FAIL");
    for (const auto& f : r.failures)
        std::fprintf(stderr, "%s\n", f.c_str());
    return r.pass() ? 0 : 1;
}

int cmd_integrate(const std::string& fn, int m, int p, const std::string& rules, int threads)
{
    const auto rule = load_shipped_rule(rules, p);
    const Mesh mesh = pyramid_mesh(m);
    const double jp = integrate_mesh(mesh, rule, integrand(parse_function(fn)), {.threads = threads});
    std::printf("function,M,p,elements,J_p\n");
    std::printf("%s,%d,%d,%zu,%.17g\n", fn.c_str(), m, p, mesh.size(), jp);
    return 0;
}

int cmd_fpoly_table(const std::vector<int>& ms, const std::vector<int>& ps, const std::string& rules)
{
    std::printf("m,p,J_p,J_inf,error\n");
    for (int p : ps) {
        const auto rule = load_shipped_rule(rules, p);
        for (int m : ms) {
            const auto row = cmd_fpoly(rule, m);
            std::printf("%d,%d,%.17g,%.17g,%.3e\n", m, p, row.jp, row.jinf, row.error());
        }
    }
    return 0;
}

int cmd_oracle_value(const std::string& fn)
{
    const auto r = cmd_oracle(integrand(parse_function(fn)));
    std::printf("function,value,check,disagreement\n");
    std::printf("%s,%.17g,%.17g,%.3e\n", fn.c_str(), r.value, r.check, r.disagreement());
    return 0;
}

int cmd_convergence_table(const std::string& fn, const std::vector<int>& ms, const std::vector<int>& ps,
                          const std::string& rules, int threads)
{
    const auto f = integrand(parse_function(fn));
    const double jref = cmd_oracle(f).value;
    std::printf("function,M,p,J_p,J_ref,error,order\n");
    for (int p : ps) {
        const auto rule = load_shipped_rule(rules, p);
        for (const auto& r : cmd_convergence(f, jref, rule, ms, threads))
            std::printf("%s,%d,%d,%.17g,%.17g,%.3e,%.3f\n", fn.c_str(), r.m, r.p, r.jp, r.jref, r.error, r.order);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hybrid4: 4D hybrid mesh refinement and cubic pyramid quadrature"};
    app.require_subcommand(1);

    std::string rule_path;
    int strength = -1;
    double tol = 1e-12;
    auto* verify = app.add_subcommand("verify-rule", "check the strength of a rule file");
    verify->add_option("rule", rule_path, "rule file")->required();
    verify->add_option("--strength", strength, "strength to verify (default: the file's)");
    verify->add_option("--tol", tol, "moment residual tolerance");

    SearchConfig cfg;
    std::string out, log_path;
    int min_n = 1;
    auto* srch = app.add_subcommand("search-rule", "search for a symmetric rule of given strength");
    srch->add_option("--strength", cfg.strength)->required();
    srch->add_option("--min-n", min_n, "smallest point count tried");
    srch->add_option("--max-n", cfg.max_points, "largest point count tried");
    srch->add_option("--seed", cfg.seed);
    srch->add_option("--tol", cfg.tol);
    srch->add_option("--budget", cfg.budget_seconds, "wall-clock budget in seconds");
    srch->add_option("--restarts", cfg.restarts, "restarts per decomposition");
    srch->add_option("--max-attempts", cfg.max_attempts, "cap on refinement runs (-1: none)");
    srch->add_option("--slack", cfg.max_extra_unknowns, "unknowns allowed above the equation count");
    srch->add_option("--stall-window", cfg.stall_window, "iterations per progress check (0: never abandon)");
    srch->add_option("--max-iterations", cfg.max_iterations);
    srch->add_option("--margin", cfg.interior_margin, "relative distance kept from the boundary");
    srch->add_option("--out", out, "rule output file (default stdout)");
    srch->add_option("--log", log_path, "CSV search log");

    int product_p = 7;
    std::string product_out;
    auto* prod = app.add_subcommand("product-rule", "conical product rule of given strength (n^4 points)");
    prod->add_option("--strength", product_p)->required();
    prod->add_option("--out", product_out, "rule output file (default stdout)");

    std::string rules_dir = HYBRID4_RULES_DIR;
    int threads = 1;

    MeshArgs mesh_args;
    std::string mesh_out;
    auto add_mesh_options = [&](CLI::App* c) {
        c->add_option("--in", mesh_args.in, "mesh file to start from instead of the unit box");
        c->add_option("--mesh-m", mesh_args.m, "tesseracts per axis on [0,1]^4");
        c->add_option("--levels", mesh_args.levels, "applications of H");
        c->add_option("--split", mesh_args.split, "region refined by B: all, half (x1 < 1/2) or none");
    };
    auto* refine = app.add_subcommand("refine", "build and refine a hybrid mesh");
    add_mesh_options(refine);
    refine->add_option("--out", mesh_out, "write the mesh in text form");

    bool unit_box = false;
    auto* audit = app.add_subcommand("audit", "conformity audit of a hybrid mesh");
    add_mesh_options(audit);
    audit->add_flag("--unit-box", unit_box, "check the volume against [0,1]^4 (files only)");

    std::string function = "f3";
    int mesh_m = 2;
    int p_single = 5;
    auto* integ = app.add_subcommand("integrate", "integrate a test function on a pyramid mesh");
    integ->add_option("--function", function, "f1, f2, f3 or one");
    integ->add_option("--mesh-m", mesh_m);
    integ->add_option("--strength", p_single);
    integ->add_option("--rules", rules_dir, "directory with pNN.txt rule files");
    integ->add_option("--threads", threads);

    std::vector<int> ms{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<int> ps{2, 3, 4, 5, 6, 7, 8, 9};
    auto* fp = app.add_subcommand("fpoly", "polynomial experiment on K*");
    fp->add_option("--m", ms, "polynomial degrees")->delimiter(',');
    fp->add_option("--strength", ps, "rule strengths")->delimiter(',');
    fp->add_option("--rules", rules_dir);

    std::vector<int> mesh_ms{1, 2, 3, 4, 5, 6};
    std::vector<int> conv_ps{2, 3, 4, 5, 6, 7, 8, 9};
    auto* conv = app.add_subcommand("convergence", "mesh convergence of a test function");
    conv->add_option("--function", function);
    conv->add_option("--mesh-m", mesh_ms, "mesh parameters")->delimiter(',');
    conv->add_option("--strength", conv_ps, "rule strengths")->delimiter(',');
    conv->add_option("--rules", rules_dir);
    conv->add_option("--threads", threads);

    auto* orac = app.add_subcommand("oracle", "tensor Gauss reference integral over [0,1]^4");
    orac->add_option("--function", function);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*verify)
            return cmd_verify_rule(rule_path, strength, tol);
        if (*srch) {
            cfg.min_points = min_n;
            return cmd_search_rule(cfg, out, log_path);
        }
        if (*prod) {
            const auto rule = conical_product_rule(product_p);
            std::string text = "# conical product rule: Gauss-Jacobi in x4, Gauss-Legendre across the section\n" +
                               save_rule(rule);
            if (product_out.empty())
                std::fputs(text.c_str(), stdout);
            else
                std::ofstream(product_out) << text;
            return 0;
        }
        if (*refine)
            return cmd_refine(mesh_args, mesh_out);
        if (*audit)
            return cmd_audit(mesh_args, unit_box);
        if (*integ)
            return cmd_integrate(function, mesh_m, p_single, rules_dir, threads);
        if (*fp)
            return cmd_fpoly_table(ms, ps, rules_dir);
        if (*conv)
            return cmd_convergence_table(function, mesh_ms, conv_ps, rules_dir, threads);
        if (*orac)
            return cmd_oracle_value(function);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
