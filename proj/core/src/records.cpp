#include "harness/records.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harness {

namespace {

using nlohmann::json;

std::string format_9sig(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

}  // namespace

double round_9sig(double value) { return std::strtod(format_9sig(value).c_str(), nullptr); }

SolutionRecord make_record(const Instance& instance, const Routing& routing,
                           const std::string& algorithm, double wall_time_s, int rank,
                           std::optional<double> h_best) {
    SolutionRecord r;
    r.bundle_weight = instance.weights.bundle_weight;
    r.algorithm = algorithm;
    r.routing = routing;
    r.wall_time_s = wall_time_s;
    r.rank = rank;
    if (h_best) r.h_best = round_9sig(*h_best);  // same precision as f

    // Round the parts first and derive f from the rounded parts so the
    // exported triple satisfies f = w_L f_L + w_B f_B at full precision.
    r.f_length = round_9sig(length_objective(instance, routing));
    r.f_bundle = round_9sig(bundling_objective(instance, routing));
    r.f = round_9sig(instance.weights.length_weight * r.f_length +
                     instance.weights.bundle_weight * r.f_bundle);
    if (h_best && *h_best > 0.0) {
        const double h9 = round_9sig(*h_best);
        r.gap = round_9sig((r.f - h9) / h9);
    }

    const Topology topo = derive_topology(instance, routing);
    for (NodeId b : topo.branch_points)
        r.topology.branch_points.push_back(instance.graph->node(b).pos);
    for (const BundleSegment& s : topo.segments)
        r.topology.segments.push_back({s.length, s.multiplicity});
    return r;
}

std::string records_csv(const std::vector<SolutionRecord>& records) {
    std::ostringstream out;
    out << "weight,algo,f,f_L,f_B,h,gap,time\n";
    for (const SolutionRecord& r : records) {
        out << format_9sig(r.bundle_weight) << ',' << r.algorithm << ','
            << format_9sig(r.f) << ',' << format_9sig(r.f_length) << ','
            << format_9sig(r.f_bundle) << ',';
        if (r.h_best) out << format_9sig(*r.h_best);
        out << ',';
        if (r.gap) out << format_9sig(*r.gap);
        out << ',' << format_9sig(r.wall_time_s) << '\n';
    }
    return out.str();
}

std::string record_json(const SolutionRecord& r) {
    json j;
    j["schema_version"] = kSolutionSchemaVersion;
    j["weight"] = round_9sig(r.bundle_weight);
    j["algo"] = r.algorithm;
    j["f"] = r.f;
    j["f_L"] = r.f_length;
    j["f_B"] = r.f_bundle;
    j["h"] = r.h_best ? json(round_9sig(*r.h_best)) : json(nullptr);
    j["gap"] = r.gap ? json(*r.gap) : json(nullptr);
    j["wall_time_s"] = round_9sig(r.wall_time_s);
    j["rank"] = r.rank;

    json routing = json::array();
    for (const Path& p : r.routing.paths) routing.push_back(p);
    j["routing"] = std::move(routing);

    json branch_points = json::array();
    for (const Vec3& p : r.topology.branch_points)
        branch_points.push_back({p.x, p.y, p.z});
    json segments = json::array();
    for (const auto& s : r.topology.segments)
        segments.push_back({{"length", round_9sig(s.length)},
                            {"multiplicity", s.multiplicity}});
    j["topology"] = {{"branch_points", std::move(branch_points)},
                     {"segments", std::move(segments)}};
    return j.dump(2);
}

SolutionRecord parse_record_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.contains("schema_version") || j.at("schema_version") != kSolutionSchemaVersion)
        throw std::runtime_error("solution schema_version missing or unsupported");

    SolutionRecord r;
    r.bundle_weight = j.at("weight").get<double>();
    r.algorithm = j.at("algo").get<std::string>();
    r.f = j.at("f").get<double>();
    r.f_length = j.at("f_L").get<double>();
    r.f_bundle = j.at("f_B").get<double>();
    if (!j.at("h").is_null()) r.h_best = j.at("h").get<double>();
    if (!j.at("gap").is_null()) r.gap = j.at("gap").get<double>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.rank = j.at("rank").get<int>();
    for (const json& p : j.at("routing")) r.routing.paths.push_back(p.get<Path>());
    const json& topo = j.at("topology");
    for (const json& b : topo.at("branch_points"))
        r.topology.branch_points.push_back(
            {b[0].get<double>(), b[1].get<double>(), b[2].get<double>()});
    for (const json& s : topo.at("segments"))
        r.topology.segments.push_back(
            {s.at("length").get<double>(), s.at("multiplicity").get<int>()});
    return r;
}

void export_records(const std::vector<SolutionRecord>& records, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (size_t i = 0; i < records.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "solution_%04zu.json", i);
        std::ofstream out(fs::path(out_dir) / name);
        if (!out) throw std::runtime_error(std::string("cannot write ") + name);
        out << record_json(records[i]) << '\n';
    }
    std::ofstream csv(fs::path(out_dir) / "summary.csv");
    if (!csv) throw std::runtime_error("cannot write summary.csv");
    csv << records_csv(records);
}

SolutionRecord load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_record_json(buffer.str());
}

void revalidate_record(const Instance& instance, const SolutionRecord& record) {
    validate_routing(instance, record.routing);
    const double tol = 1e-9 * std::max(1.0, std::abs(record.f));
    const double combined = instance.weights.length_weight * record.f_length +
                            instance.weights.bundle_weight * record.f_bundle;
    if (std::abs(record.f - combined) > tol)
        throw std::runtime_error("record objective inconsistent with its parts");
    // Stored parts are rounded to 9 significant digits.
    const double f_len = length_objective(instance, record.routing);
    const double f_bun = bundling_objective(instance, record.routing);
    if (std::abs(record.f_length - f_len) > 1e-8 * std::max(1.0, f_len) ||
        std::abs(record.f_bundle - f_bun) > 1e-8 * std::max(1.0, f_bun))
        throw std::runtime_error("record objectives do not match the routing");
    if (record.h_best && *record.h_best > record.f + tol)
        throw std::runtime_error("record bound exceeds its objective");
}

}  // namespace harness
