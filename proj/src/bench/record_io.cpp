#include "uzawa/bench/record_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uzawa::bench {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json config_json(const ExperimentConfig& c)
{
    json j;
    j["problem"] = std::string(fem::to_string(c.problem));
    j["equation"] = std::string(fem::to_string(c.equation));
    j["nu"] = c.nu;
    j["grid"] = c.grid;
    j["method"] = std::string(to_string(c.method));
    j["window"] = c.window;
    j["omega"] = c.omega ? json(*c.omega) : json("auto");
    j["beta"] = c.beta ? json(*c.beta) : json(nullptr);
    j["qb"] = c.qb ? json(std::string(saddle::to_string(*c.qb))) : json(nullptr);
    j["tol"] = c.tol;
    j["max_iters"] = c.max_iters;
    j["inner"] = std::string(saddle::to_string(c.inner));
    j["picard_steps"] = c.picard_steps;
    return j;
}

ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    c.problem = fem::parse_domain(j.at("problem").get<std::string>());
    c.equation = fem::parse_equation(j.at("equation").get<std::string>());
    c.nu = j.at("nu").get<double>();
    c.grid = j.at("grid").get<std::size_t>();
    c.method = parse_method(j.at("method").get<std::string>());
    c.window = j.at("window").get<std::size_t>();
    if (j.at("omega").is_number()) c.omega = j.at("omega").get<double>();
    if (j.at("beta").is_number()) c.beta = j.at("beta").get<double>();
    if (j.at("qb").is_string()) c.qb = saddle::parse_qb(j.at("qb").get<std::string>());
    c.tol = j.at("tol").get<double>();
    c.max_iters = j.at("max_iters").get<std::size_t>();
    c.inner = saddle::parse_inner_method(j.at("inner").get<std::string>());
    c.picard_steps = j.at("picard_steps").get<std::size_t>();
    return c;
}

accel::Status parse_status(const std::string& s)
{
    if (s == "converged") return accel::Status::Converged;
    if (s == "diverged") return accel::Status::Diverged;
    if (s.rfind("exceeded_", 0) == 0) return accel::Status::MaxIterations;
    throw std::invalid_argument("unknown status '" + s + "'");
}

json record_json(const RunRecord& r)
{
    json j;
    j["config"] = config_json(r.config);
    j["grid_label"] = r.grid_label;
    j["num_unknowns"] = r.num_unknowns;
    j["omega"] = r.omega;
    j["beta"] = r.beta;
    j["iterations"] = r.iterations;
    j["status"] = status_label(r.status, r.config.max_iters);
    j["final_relative_residual"] = r.final_relative_residual;
    j["residual_history"] = r.residual_history;
    j["wall_time"] = r.wall_time;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace

Format parse_format(std::string_view name)
{
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string record_to_csv(const RunRecord& r)
{
    std::string out = "iter,relative_residual\n";
    for (std::size_t k = 0; k < r.residual_history.size(); ++k)
        out += std::to_string(k) + "," + fmt(r.residual_history[k]) + "\n";
    return out;
}

std::string record_to_json(const RunRecord& r)
{
    return record_json(r).dump(1) + "\n";
}

RunRecord record_from_json(std::string_view text)
{
    const json j = json::parse(text);
    RunRecord r;
    r.config = config_from_json(j.at("config"));
    r.grid_label = j.at("grid_label").get<std::string>();
    r.num_unknowns = j.at("num_unknowns").get<std::size_t>();
    r.omega = j.at("omega").get<double>();
    r.beta = j.at("beta").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.final_relative_residual = j.at("final_relative_residual").get<double>();
    r.residual_history = j.at("residual_history").get<std::vector<double>>();
    r.wall_time = j.at("wall_time").get<double>();
    return r;
}

void emit(const RunRecord& r, Format format, std::ostream& out)
{
    out << (format == Format::Csv ? record_to_csv(r) : record_to_json(r));
}

void emit(const RunRecord& r, Format format, const std::filesystem::path& path)
{
    write_file(path, format == Format::Csv ? record_to_csv(r) : record_to_json(r));
}

std::string table_to_csv(const TableSummary& t)
{
    std::ostringstream out;
    out << "table,nu,grid,method,window,omega,beta,reported,iterations,status,deviation,note\n";
    for (const auto& c : t.cells) {
        const auto& ref = c.reference;
        out << t.table << ',' << fmt(ref.nu) << ',' << (c.record.grid_label.empty() ? std::to_string(ref.grid) : c.record.grid_label)
            << ',' << to_string(ref.method) << ',' << ref.window << ',';
        if (ref.method != Method::RDF) out << (c.skipped ? "" : fmt(c.record.omega));
        out << ',';
        if (ref.beta) out << fmt(*ref.beta);
        out << ',' << ref.reported << ',';
        if (!c.skipped) out << c.record.iterations << ',' << status_label(c.record.status, c.record.config.max_iters);
        else out << ",skipped";
        out << ',';
        if (c.deviation) out << *c.deviation;
        out << ',' << c.note << '\n';
    }
    return out.str();
}

std::string table_to_json(const TableSummary& t)
{
    json j;
    j["table"] = t.table;
    j["title"] = t.title;
    j["cells"] = json::array();
    for (const auto& c : t.cells) {
        json cell;
        cell["nu"] = c.reference.nu;
        cell["grid"] = c.reference.grid;
        cell["method"] = std::string(to_string(c.reference.method));
        cell["window"] = c.reference.window;
        cell["reported"] = c.reference.reported;
        cell["skipped"] = c.skipped;
        cell["note"] = c.note;
        cell["deviation"] = c.deviation ? json(*c.deviation) : json(nullptr);
        if (!c.skipped) cell["record"] = record_json(c.record);
        j["cells"].push_back(std::move(cell));
    }
    return j.dump(1) + "\n";
}

void emit(const TableSummary& t, Format format, const std::filesystem::path& path)
{
    write_file(path, format == Format::Csv ? table_to_csv(t) : table_to_json(t));
}

} // namespace uzawa::bench
