#include "sphere/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

std::string location(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line);
}

template <class T>
bool parse_token(std::string_view token, T& out) {
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("cannot format value");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    if (!parse_token(text, value)) throw DataError("not a number: '" + std::string(text) + "'");
    return value;
}

LoadedGraph load_edge_list(std::istream& in, std::string_view source_name) {
    struct Row {
        std::int64_t a, b;
        double w;
    };
    std::vector<Row> rows;
    std::vector<std::int64_t> ids;
    bool header_allowed = true;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.front().front() == '#') {
            // Header written by write_edge_list: pins ids 0..n-1, keeping isolated nodes.
            std::size_t n = 0;
            if (header_allowed && fields.size() >= 3 && fields[0] == "#" && fields[1] == "nodes" &&
                parse_token(fields[2], n)) {
                for (std::size_t i = 0; i < n; ++i) ids.push_back(static_cast<std::int64_t>(i));
            }
            continue;
        }
        header_allowed = false;
        if (fields.size() != 2 && fields.size() != 3) {
            throw DataError(location(source_name, line_no) + ": expected 2 or 3 fields");
        }
        Row row{0, 0, 1.0};
        if (!parse_token(fields[0], row.a) || !parse_token(fields[1], row.b)) {
            throw DataError(location(source_name, line_no) + ": node ids must be integers");
        }
        if (fields.size() == 3 && (!parse_token(fields[2], row.w) || !(row.w > 0.0 && row.w <= 1.0))) {
            throw DataError(location(source_name, line_no) + ": weight must be a number in (0,1]");
        }
        ids.push_back(row.a);
        ids.push_back(row.b);
        rows.push_back(row);
    }
    if (in.bad()) throw DataError("read failure on " + std::string(source_name));

    // Dense ids follow ascending file ids, so id tie-breaks agree in both numberings.
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](std::int64_t id) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    for (const auto& row : rows) {
        const NodeId u = dense(row.a);
        const NodeId v = dense(row.b);
        if (u == v) continue;
        const NodeId lo = std::min(u, v);
        const NodeId hi = std::max(u, v);
        if (!seen.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second) continue;
        edges.push_back(Edge{lo, hi, row.w});
    }
    LoadedGraph out;
    out.graph = WeightedGraph::build(ids.size(), edges);
    out.original_ids = std::move(ids);
    return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return load_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    const auto edges = g.edges();
    bool unit = true;
    for (const auto& e : edges) unit = unit && e.weight == 1.0;
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (const auto& e : edges) {
        out << e.u << '\t' << e.v;
        if (!unit) out << '\t' << format_double(e.weight);
        out << '\n';
    }
}

void write_edge_list(const std::filesystem::path& path, const WeightedGraph& g) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_edge_list(out, g);
    if (!out) throw DataError("write failure on " + path.string());
}

}  // namespace sphere
