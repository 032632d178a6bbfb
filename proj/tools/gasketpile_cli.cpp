// Command-line surface for the gasketpile library: graph/config plumbing,
// identity computation, structure verification, exact integrals and
// convergence tables, burning test, group addition, and figure rendering.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gasketpile/construct.hpp"
#include "gasketpile/engine.hpp"
#include "gasketpile/json_io.hpp"
#include "gasketpile/measure.hpp"
#include "gasketpile/render.hpp"

namespace {

struct LevelRange {
    int lo = 0, hi = 0;
};

LevelRange parse_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("levels", "expected A..B, got '" + s + "'");
    LevelRange r;
    r.lo = std::stoi(s.substr(0, pos));
    r.hi = std::stoi(s.substr(pos + 2));
    if (r.hi < r.lo)
        throw CLI::ValidationError("levels", "empty range '" + s + "'");
    return r;
}

std::vector<double> parse_csv_numbers(const std::string& s) {
    std::vector<double> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

int cmd_verify_structure(const LevelRange& range) {
    bool all_pass = true;
    for (int m = range.lo; m <= range.hi; ++m) {
        const gp::SandpileConfig engine_id =
            gp::identity(gp::cached_gasket(m), false);
        const gp::SandpileConfig assembled =
            gp::to_config(gp::assemble_identity(m));
        const bool ok = engine_id.heights == assembled.heights;
        std::cout << "level " << m << ": " << (ok ? "PASS" : "FAIL") << "\n";
        all_pass = all_pass && ok;
    }
    return all_pass ? 0 : 1;
}

gp::FamilySpec make_family(const std::string& name,
                           const std::vector<double>& params) {
    gp::FamilySpec spec;
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("family '" + name + "' needs " +
                                        std::to_string(n) + " params, got " +
                                        std::to_string(params.size()));
    };
    if (name == "id") {
        spec.family = gp::Family::IdNormal;
        need(0);
    } else if (name == "id_top") {
        spec.family = gp::Family::IdTop;
        need(0);
    } else if (name == "id_two") {
        spec.family = gp::Family::IdTwoCorner;
        need(0);
    } else if (name == "M") {
        spec.family = gp::Family::M;
        need(3);
        spec.x = params[0], spec.y = params[1], spec.z = params[2];
    } else if (name == "f") {
        spec.family = gp::Family::F;
        need(6);
        spec.a = params[0], spec.b = params[1], spec.c = params[2];
        spec.x = params[3], spec.y = params[4], spec.z = params[5];
    } else {
        throw std::invalid_argument("unknown family '" + name + "'");
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandpile identities on Sierpinski gasket graphs"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "write a graph JSON");
    int b_level = 0;
    std::string b_sink = "normal", b_out;
    build->add_option("--level", b_level, "approximation level n")->required();
    build->add_option("--sink", b_sink, "normal|top|top_right");
    build->add_option("--out", b_out, "output path")->required();

    // identity
    auto* ident = app.add_subcommand("identity", "compute the group identity");
    int i_level = 0;
    std::string i_sink = "normal", i_out;
    bool i_no_verify = false;
    ident->add_option("--level", i_level)->required();
    ident->add_option("--sink", i_sink, "normal|top|top_right");
    ident->add_option("--out", i_out, "output config JSON path")->required();
    ident->add_flag("--no-verify", i_no_verify,
                    "skip recurrence/neutrality self-check");

    // verify-structure
    auto* verify = app.add_subcommand(
        "verify-structure", "engine identity vs assembled construction");
    std::string v_levels;
    verify->add_option("--levels", v_levels, "range A..B")->required();

    // integrate
    auto* integrate = app.add_subcommand(
        "integrate", "integral of a config's continuation over a cell");
    std::string g_config, g_cell;
    bool g_exact = false;
    integrate->add_option("--config", g_config, "config JSON path")->required();
    integrate->add_option("--cell", g_cell, "cell word digits, empty = whole");
    integrate->add_flag("--exact", g_exact, "print num/den instead of decimal");

    // converge
    auto* converge = app.add_subcommand("converge", "convergence table");
    std::string c_family, c_params, c_levels, c_cell, c_format = "csv";
    converge->add_option("--family", c_family, "id|id_top|id_two|M|f")
        ->required();
    converge->add_option("--params", c_params,
                         "x,y,z for M; a,b,c,x,y,z for f");
    converge->add_option("--levels", c_levels, "range A..B")->required();
    converge->add_option("--cell", c_cell, "cell word digits");
    converge->add_option("--format", c_format, "csv|json");

    // burn
    auto* burn = app.add_subcommand("burn", "Dhar burning test");
    std::string burn_config;
    burn->add_option("--config", burn_config)->required();

    // add
    auto* add = app.add_subcommand("add", "group addition a (+) b");
    std::string a_a, a_b, a_out;
    add->add_option("--a", a_a)->required();
    add->add_option("--b", a_b)->required();
    add->add_option("--out", a_out)->required();

    // render
    auto* render = app.add_subcommand("render", "dot plot of a config");
    std::string r_config, r_format = "ppm", r_out;
    render->add_option("--config", r_config)->required();
    render->add_option("--format", r_format, "ppm|svg");
    render->add_option("--out", r_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*build) {
            const gp::GasketGraph& g =
                gp::cached_gasket(b_level, gp::sink_from_name(b_sink));
            gp::write_file(b_out, gp::graph_to_json(g));
        } else if (*ident) {
            const gp::GasketGraph& g =
                gp::cached_gasket(i_level, gp::sink_from_name(i_sink));
            gp::write_file(i_out,
                           gp::config_to_json(gp::identity(g, !i_no_verify)));
        } else if (*verify) {
            return cmd_verify_structure(parse_range(v_levels));
        } else if (*integrate) {
            const gp::SandpileConfig c =
                gp::config_from_json(gp::read_file(g_config));
            const gp::ExactRational r = gp::cell_integral(
                gp::make_view(c), gp::CellWord::parse(g_cell));
            if (g_exact)
                std::cout << numerator(r).str() << "/" << denominator(r).str()
                          << "\n";
            else
                std::cout << gp::decimal_string(r, 20) << "\n";
        } else if (*converge) {
            const LevelRange range = parse_range(c_levels);
            const auto rows = gp::convergence_table(
                make_family(c_family, parse_csv_numbers(c_params)),
                gp::CellWord::parse(c_cell), range.lo, range.hi);
            if (c_format == "csv")
                std::cout << gp::table_to_csv(rows);
            else if (c_format == "json")
                std::cout << gp::table_to_json(rows);
            else
                throw std::invalid_argument("unknown format '" + c_format + "'");
        } else if (*burn) {
            const gp::SandpileConfig c =
                gp::config_from_json(gp::read_file(burn_config));
            const gp::BurnReport rep = gp::is_recurrent(c);
            std::cout << "recurrent: " << (rep.recurrent ? "true" : "false")
                      << "\nburn_order:";
            for (auto v : rep.burn_order) std::cout << " " << v;
            std::cout << "\n";
        } else if (*add) {
            const gp::SandpileConfig ca =
                gp::config_from_json(gp::read_file(a_a));
            const gp::SandpileConfig cb =
                gp::config_from_json(gp::read_file(a_b));
            gp::write_file(a_out, gp::config_to_json(gp::group_add(ca, cb)));
        } else if (*render) {
            const gp::SandpileConfig c =
                gp::config_from_json(gp::read_file(r_config));
            gp::RenderSpec spec;
            if (r_format == "ppm")
                spec.format = gp::RenderSpec::Format::Ppm;
            else if (r_format == "svg")
                spec.format = gp::RenderSpec::Format::Svg;
            else
                throw std::invalid_argument("unknown format '" + r_format + "'");
            gp::write_file(r_out, gp::render(c, spec));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
