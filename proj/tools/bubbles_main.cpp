// Command-line interface for the triple-bubble solvers: equilibrium solving,
// type construction, classification, brute-force verification, phase-diagram
// sweeps and rendering. Results go to stdout, diagnostics to stderr. Exit
// codes: 0 success, 1 invalid invocation or input, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bubbles/classify.hpp"
#include "bubbles/density.hpp"
#include "bubbles/nested.hpp"
#include "bubbles/oracle.hpp"
#include "bubbles/standard_bubble.hpp"
#include "bubbles/sweep.hpp"
#include "bubbles/transform.hpp"

namespace {

using namespace bubbles;

enum class Format { human, csv };

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string perimeter7(double v) { return fmt(v, "%.7f"); }

BuiltinFamily parse_density(const std::string& name) {
    if (name == "f1") return density_f1();
    if (name == "f2") return density_f2();
    if (name.rfind("fam:", 0) == 0) {
        double c = 0.0;
        try {
            c = std::stod(name.substr(4));
        } catch (const std::exception&) {
            throw std::invalid_argument("density: cannot parse parameter in '" + name + "'");
        }
        return builtin_family(c);
    }
    throw std::invalid_argument("density: unknown name '" + name + "' (use f1, f2, or fam:<c>)");
}

std::vector<double> parse_volumes(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw std::invalid_argument("volumes: cannot parse '" + field + "'");
        }
        if (!(out.back() > 0.0))
            throw std::invalid_argument("volumes: values must be positive");
    }
    if (out.empty()) throw std::invalid_argument("volumes: none given");
    return out;
}

void require_sorted_triple(const std::vector<double>& v) {
    if (v.size() != 3)
        throw std::invalid_argument("volumes: expected exactly three values v1,v2,v3");
    if (!(v[0] <= v[1] && v[1] <= v[2]))
        throw std::invalid_argument("volumes: must satisfy V1 <= V2 <= V3");
}

struct CommonOptions {
    std::string density = "f2";
    std::string volumes;
    double tol = 1e-12;
    double tie = kDefaultTieThreshold;
    Format format = Format::human;
    int threads = 1;
};

void add_format_flag(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--format", opt.format, "Output mode")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"human", Format::human}, {"csv", Format::csv}}));
}

void run_solve(const CommonOptions& opt) {
    const auto d = parse_density(opt.density);
    const auto volumes = parse_volumes(opt.volumes);
    const StandardBubble b = solve_standard(d, std::span<const double>(volumes), opt.tol);
    if (opt.format == Format::csv) {
        for (std::size_t j = 0; j < b.boundary_points.size(); ++j)
            std::cout << 'w' << j << ',';
        std::cout << "residual,perimeter\n";
        for (double w : b.boundary_points) std::cout << fmt(w, "%.10g") << ',';
        std::cout << fmt(b.residual, "%.6e") << ',' << perimeter7(b.perimeter) << '\n';
        return;
    }
    std::cout << "density: " << d.name() << '\n';
    std::cout << "boundary points:";
    for (double w : b.boundary_points) std::cout << ' ' << fmt(w, "%.10g");
    std::cout << '\n';
    std::cout << "residual: " << fmt(b.residual, "%.6e") << '\n';
    std::cout << "perimeter: " << perimeter7(b.perimeter) << '\n';
}

void run_build(const CommonOptions& opt, const std::string& type) {
    const auto d = parse_density(opt.density);
    const auto v = parse_volumes(opt.volumes);
    require_sorted_triple(v);

    std::optional<NestedBubble> nb;
    if (type == "213") nb = build_213(d, v[0], v[1], v[2], opt.tol);
    else if (type == "3123") nb = build_3123(d, v[0], v[1], v[2], opt.tol);
    else if (type == "2313") nb = build_2313(d, v[0], v[1], v[2], opt.tol);
    else if (type == "32123") nb = build_32123(d, v[0], v[1], v[2], opt.tol);
    else throw std::invalid_argument("type: must be one of 213, 3123, 2313, 32123");

    if (!nb) {
        std::cout << (opt.format == Format::csv ? "type,perimeter\n" + type + ",\n"
                                                : "type: " + type + "\nNot exist\n");
        return;
    }
    if (opt.format == Format::csv) {
        std::cout << "type,assignment,perimeter";
        for (std::size_t j = 0; j < nb->boundary_points.size(); ++j) std::cout << ",w" << j;
        std::cout << '\n' << type << ",\"" << to_string(nb->assignment) << "\","
                  << perimeter7(nb->perimeter);
        for (double w : nb->boundary_points) std::cout << ',' << fmt(w, "%.10g");
        std::cout << '\n';
        return;
    }
    std::cout << "type: " << type << '\n';
    std::cout << "boundary points:";
    for (double w : nb->boundary_points) std::cout << ' ' << fmt(w, "%.10g");
    std::cout << '\n';
    std::cout << "assignment: " << to_string(nb->assignment) << '\n';
    std::cout << "perimeter: " << perimeter7(nb->perimeter) << '\n';
}

std::string perim_or_empty(const std::optional<double>& p) {
    return p ? perimeter7(*p) : std::string();
}

void print_classification_human(const TripleClassification& c) {
    for (BubbleType t : TripleClassification::triple_types()) {
        const auto p = c.perimeter_of(t);
        std::printf("%-6s %s%s\n", to_string(t).c_str(),
                    p ? perimeter7(*p).c_str() : "Not exist",
                    (p && t == c.winner) ? " *" : "");
    }
    std::printf("winner: %s\n", to_string(c.winner).c_str());
    std::printf("margin: %s\n", fmt(c.margin, "%.10g").c_str());
    std::printf("decisive: %s\n", c.decisive ? "yes" : "no");
    if (c.borderline)
        std::printf("note: 2313 existence inequality within 1e-12 of equality\n");
}

void run_classify(const CommonOptions& opt) {
    const auto d = parse_density(opt.density);
    const auto v = parse_volumes(opt.volumes);
    require_sorted_triple(v);
    const auto c = classify_triple(d, v[0], v[1], v[2], opt.tol, opt.tie);
    if (opt.format == Format::csv) {
        std::cout << "v1,v2,v3,p213,p3123,p2313,p32123,winner,margin,decisive\n";
        std::cout << fmt(v[0], "%.10g") << ',' << fmt(v[1], "%.10g") << ',' << fmt(v[2], "%.10g")
                  << ',' << perim_or_empty(c.p213) << ',' << perim_or_empty(c.p3123) << ','
                  << perim_or_empty(c.p2313) << ',' << perim_or_empty(c.p32123) << ','
                  << to_string(c.winner) << ',' << fmt(c.margin, "%.10g") << ','
                  << (c.decisive ? 1 : 0) << '\n';
        return;
    }
    print_classification_human(c);
}

const std::vector<std::array<double, 3>>& reference_triples() {
    static const std::vector<std::array<double, 3>> rows{
        {5, 100, 500}, {5, 40, 2000}, {0.01, 100, 1500}, {2, 80, 2500}};
    return rows;
}

void run_table(const CommonOptions& opt) {
    const auto d = parse_density(opt.density);
    if (opt.format == Format::csv) {
        std::cout << "v1,v2,v3,p213,p3123,p2313,p32123,winner\n";
        for (const auto& [v1, v2, v3] : reference_triples()) {
            const auto c = classify_triple(d, v1, v2, v3, opt.tol, opt.tie);
            std::cout << fmt(v1, "%.10g") << ',' << fmt(v2, "%.10g") << ',' << fmt(v3, "%.10g")
                      << ',' << perim_or_empty(c.p213) << ',' << perim_or_empty(c.p3123) << ','
                      << perim_or_empty(c.p2313) << ',' << perim_or_empty(c.p32123) << ','
                      << to_string(c.winner) << '\n';
        }
        return;
    }
    std::printf("%-18s %-15s %-15s %-15s %-15s\n", "(V1,V2,V3)", "Type 213", "Type 3123",
                "Type 2313", "Type 32123");
    for (const auto& [v1, v2, v3] : reference_triples()) {
        const auto c = classify_triple(d, v1, v2, v3, opt.tol, opt.tie);
        const std::string label =
            "(" + fmt(v1, "%g") + "," + fmt(v2, "%g") + "," + fmt(v3, "%g") + ")";
        auto cell = [&](BubbleType t) -> std::string {
            const auto p = c.perimeter_of(t);
            if (!p) return "Not exist";
            return (t == c.winner ? "*" : " ") + perimeter7(*p);
        };
        std::printf("%-18s %-15s %-15s %-15s %-15s\n", label.c_str(),
                    cell(BubbleType::T213).c_str(), cell(BubbleType::T3123).c_str(),
                    cell(BubbleType::T2313).c_str(), cell(BubbleType::T32123).c_str());
    }
}

void run_oracle(const CommonOptions& opt, int grid, const std::string& which) {
    const auto d = parse_density(opt.density);
    const auto v = parse_volumes(opt.volumes);
    require_sorted_triple(v);
    if (which != "all" && which != "four")
        throw std::invalid_argument("orderings: must be 'all' or 'four'");

    const auto& all = ten_orderings();
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (which == "all" || all[i].admissible_type()) selected.push_back(i);

    std::size_t winner = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<OrderingMinimum> minima;
    for (std::size_t k = 0; k < selected.size(); ++k) {
        minima.push_back(
            minimize_ordering(d, all[selected[k]], v[0], v[1], v[2], grid, opt.threads));
        if (minima.back().perimeter < best) {
            best = minima.back().perimeter;
            winner = k;
        }
    }

    if (opt.format == Format::csv) {
        std::cout << "ordering,perimeter,winner\n";
        for (std::size_t k = 0; k < selected.size(); ++k)
            std::cout << '"' << all[selected[k]].label() << "\"," << perimeter7(minima[k].perimeter)
                      << ',' << (k == winner ? 1 : 0) << '\n';
        return;
    }
    for (std::size_t k = 0; k < selected.size(); ++k)
        std::printf("%-18s %s%s\n", all[selected[k]].label().c_str(),
                    perimeter7(minima[k].perimeter).c_str(), k == winner ? " *" : "");
    std::printf("winner: %s\n", all[selected[winner]].label().c_str());
}

void run_sweep(const CommonOptions& opt, const std::string& v1_text, const std::string& v2_text,
               const std::string& v3_text, const std::string& out_dir) {
    const auto d = parse_density(opt.density);
    const AxisSpec v1_spec = AxisSpec::parse(v1_text);
    const AxisSpec v2_spec = AxisSpec::parse(v2_text);
    const AxisSpec v3_spec = AxisSpec::parse(v3_text);
    const auto frames = sweep(d, v1_spec, v2_spec, v3_spec, opt.tie, opt.tol, opt.threads);
    const auto paths = save_frames(frames, out_dir);
    std::cout << "wrote " << paths.size() << " frames to " << out_dir << '\n';
}

void run_render(const std::string& in_dir, const std::string& out_dir) {
    const auto written = render_directory(in_dir, out_dir);
    std::cout << "wrote " << written.size() << " images to " << out_dir << '\n';
}

void run_transform(const CommonOptions& opt, const std::string& expr,
                   const std::vector<double>& probes) {
    const VolumeMap map(named_positional(expr), opt.tol);
    const DensityProfile profile = map.to_profile();
    if (opt.format == Format::csv) std::cout << "V,f,fprime\n";
    else std::cout << "positional: " << expr << "  tol: " << fmt(map.tol(), "%g") << '\n';
    for (double v : probes) {
        const double f = profile.value(v);
        const double fp = profile.derivative(v);
        if (opt.format == Format::csv)
            std::cout << fmt(v, "%.10g") << ',' << fmt(f, "%.10g") << ',' << fmt(fp, "%.10g")
                      << '\n';
        else
            std::cout << "V=" << fmt(v, "%.10g") << "  f=" << fmt(f, "%.10g")
                      << "  f'=" << fmt(fp, "%.10g") << '\n';
    }
}

void run_validate(const CommonOptions& opt, int samples) {
    const auto d = parse_density(opt.density);
    const ValidationReport report = validate_density(d, samples);
    if (opt.format == Format::csv) {
        std::cout << "check,passed,detail\n";
        for (const auto& c : report.checks)
            std::cout << c.name << ',' << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
        return;
    }
    for (const auto& c : report.checks)
        std::printf("%-22s %s%s%s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                    c.detail.empty() ? "" : "  ", c.detail.c_str());
    std::printf("%s\n", report.all_passed() ? "all checks passed" : "some checks failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perimeter-minimizing multi-bubbles on the line, in volume coordinates"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string build_type, orderings = "all", v1_spec, v2_spec, v3_spec;
    std::string in_dir, out_dir, expr;
    std::vector<double> probes;
    int grid = 512, samples = 64;

    auto add_density = [&](CLI::App* cmd) {
        cmd->add_option("--density", opt.density, "Density name: f1, f2, or fam:<c>");
    };
    auto add_volumes = [&](CLI::App* cmd) {
        cmd->add_option("--volumes", opt.volumes, "Comma-separated positive volumes")->required();
    };
    auto add_tol = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "Solver tolerance (default 1e-12)");
    };
    auto add_tie = [&](CLI::App* cmd) {
        cmd->add_option("--tie", opt.tie, "Tie threshold (default 1e-4)");
    };
    auto add_threads = [&](CLI::App* cmd) {
        cmd->add_option("--threads", opt.threads, "Worker thread cap (default 1)")
            ->check(CLI::PositiveNumber);
    };

    auto* solve = app.add_subcommand("solve", "Solve a standard n-bubble equilibrium");
    add_density(solve); add_volumes(solve); add_tol(solve); add_format_flag(solve, opt);
    solve->callback([&] { run_solve(opt); });

    auto* build = app.add_subcommand("build", "Construct one triple-bubble type");
    add_density(build); add_volumes(build); add_tol(build); add_format_flag(build, opt);
    build->add_option("--type", build_type, "213, 3123, 2313, or 32123")->required();
    build->callback([&] { run_build(opt, build_type); });

    auto* classify = app.add_subcommand("classify", "Classify the minimizing type for a triple");
    add_density(classify); add_volumes(classify); add_tol(classify); add_tie(classify);
    add_format_flag(classify, opt);
    classify->callback([&] { run_classify(opt); });

    auto* table = app.add_subcommand("table", "Print the built-in reference triples table");
    add_density(table); add_tol(table); add_tie(table); add_format_flag(table, opt);
    table->callback([&] { run_table(opt); });

    auto* oracle = app.add_subcommand("oracle", "Brute-force minimize candidate orderings");
    add_density(oracle); add_volumes(oracle); add_threads(oracle); add_format_flag(oracle, opt);
    oracle->add_option("--grid", grid, "Coarse grid cells per dimension (default 512)");
    oracle->add_option("--orderings", orderings, "all (ten) or four (admissible)");
    oracle->callback([&] { run_oracle(opt, grid, orderings); });

    auto* sweep = app.add_subcommand("sweep", "Classify a (V1,V2,V3) grid into CSV frames");
    add_density(sweep); add_tol(sweep); add_tie(sweep); add_threads(sweep);
    sweep->add_option("--v1", v1_spec, "Axis spec {lin|log}:<min>:<max>:<count>")
        ->default_str("log:0.01:6:40");
    sweep->add_option("--v2", v2_spec, "Axis spec (linear only)")->default_str("lin:0.01:120:400");
    sweep->add_option("--v3", v3_spec, "Axis spec (linear only)")->default_str("lin:0.01:3000:400");
    sweep->add_option("--out", out_dir, "Output directory for frame_<k>.csv")->required();
    sweep->callback([&] {
        if (v1_spec.empty()) v1_spec = "log:0.01:6:40";
        if (v2_spec.empty()) v2_spec = "lin:0.01:120:400";
        if (v3_spec.empty()) v3_spec = "lin:0.01:3000:400";
        run_sweep(opt, v1_spec, v2_spec, v3_spec, out_dir);
    });

    auto* render = app.add_subcommand("render", "Render frame CSVs to P6 pixmaps");
    render->add_option("--in", in_dir, "Directory containing frame_<k>.csv")->required();
    render->add_option("--out", out_dir, "Output directory for frame_<k>.ppm")->required();
    render->callback([&] { run_render(in_dir, out_dir); });

    auto* transform = app.add_subcommand("transform",
                                         "Convert a positional density to volume coordinates");
    transform->add_option("--expr", expr, "Positional density: const, expabs, borell")->required();
    transform->add_option("--tol", opt.tol, "Inversion tolerance in V (default 1e-9)");
    transform->add_option("--probe", probes, "Volume coordinates to evaluate")->expected(-1);
    add_format_flag(transform, opt);
    transform->callback([&] {
        if (probes.empty()) throw std::invalid_argument("transform: at least one --probe required");
        run_transform(opt, expr, probes);
    });

    auto* validate = app.add_subcommand("validate-density", "Numerically probe a density");
    add_density(validate); add_format_flag(validate, opt);
    validate->add_option("--samples", samples, "Sample count (default 64)");
    validate->callback([&] { run_validate(opt, samples); });

    // transform's tolerance serves a different role; give it a looser default.
    transform->preparse_callback([&](std::size_t) { opt.tol = 1e-9; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
