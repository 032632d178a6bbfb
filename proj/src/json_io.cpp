#include "gasketpile/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gasketpile/construct.hpp"
#include "json.hpp"

namespace gp {

namespace {

using nlohmann::json;

std::string rational_num(const ExactRational& r) {
    return numerator(r).str();
}
std::string rational_den(const ExactRational& r) {
    return denominator(r).str();
}

}  // namespace

std::string graph_to_json(const GasketGraph& g) {
    json j;
    j["level"] = g.level();
    j["sink"] = sink_name(g.sink());
    json vertices = json::array();
    for (const VertexKey& v : g.vertices())
        vertices.push_back(std::to_string(v.p) + "," + std::to_string(v.q));
    j["vertices"] = std::move(vertices);
    json edges = json::array();
    json sink_edges = json::array();
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        for (const auto& e : g.neighbors(i))
            if (static_cast<std::int32_t>(i) < e.to)
                edges.push_back({i, e.to, e.multiplicity});
        if (g.sink_multiplicity(i) > 0)
            sink_edges.push_back({i, g.sink_multiplicity(i)});
    }
    j["edges"] = std::move(edges);
    j["sink_edges"] = std::move(sink_edges);
    return j.dump(2) + "\n";
}

std::string config_to_json(const SandpileConfig& c) {
    json j;
    j["level"] = c.graph->level();
    j["sink"] = sink_name(c.graph->sink());
    j["heights"] = c.heights;
    return j.dump(2) + "\n";
}

SandpileConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed config JSON: ") +
                                    e.what());
    }
    if (!j.contains("level") || !j.contains("sink") || !j.contains("heights"))
        throw std::invalid_argument(
            "config JSON needs fields level, sink, heights");
    const GasketGraph& g =
        cached_gasket(j.at("level").get<int>(),
                      sink_from_name(j.at("sink").get<std::string>()));
    SandpileConfig c{&g, j.at("heights").get<std::vector<std::uint64_t>>()};
    if (c.heights.size() != g.vertex_count())
        throw std::invalid_argument(
            "config JSON has " + std::to_string(c.heights.size()) +
            " heights, graph has " + std::to_string(g.vertex_count()) +
            " vertices");
    return c;
}

std::string table_to_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream out;
    out << "level,cell,integral_num,integral_den,target_num,target_den,"
           "abs_error_decimal\n";
    for (const auto& r : rows)
        out << r.level << ',' << r.cell.str() << ',' << rational_num(r.integral)
            << ',' << rational_den(r.integral) << ',' << rational_num(r.target)
            << ',' << rational_den(r.target) << ','
            << decimal_string(r.abs_error, 20) << '\n';
    return out.str();
}

std::string table_to_json(const std::vector<ConvergenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"level", r.level},
                       {"cell", r.cell.str()},
                       {"integral_num", rational_num(r.integral)},
                       {"integral_den", rational_den(r.integral)},
                       {"target_num", rational_num(r.target)},
                       {"target_den", rational_den(r.target)},
                       {"abs_error_decimal", decimal_string(r.abs_error, 20)}});
    return arr.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gp
