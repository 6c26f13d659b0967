#include "uzawa/bench/tables.hpp"

#include "uzawa/saddle/eigen_estimate.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <stdexcept>

namespace uzawa::bench {

namespace {

using nlohmann::json;

const json& document()
{
    static const json doc = json::parse(reference_tables_json());
    return doc;
}

const json& table_entry(int table)
{
    for (const auto& t : document().at("tables"))
        if (t.at("id").get<int>() == table) return t;
    throw std::invalid_argument("unknown table id " + std::to_string(table) + " (expected 1.." +
                                std::to_string(reference_table_count()) + ")");
}

bool same_nu(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

std::optional<double> number_or_empty(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) return std::nullopt;
    return j.at(key).get<double>();
}

std::string reported_text(const json& v)
{
    return v.is_number() ? std::to_string(v.get<long>()) : v.get<std::string>();
}

std::optional<long> parse_count(const std::string& s)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return std::stol(s);
}

} // namespace

int reference_table_count()
{
    return static_cast<int>(document().at("tables").size());
}

std::string reference_table_title(int table)
{
    return table_entry(table).at("title").get<std::string>();
}

std::vector<ReferenceCell> reference_cells(int table)
{
    const json& t = table_entry(table);
    const auto domain = fem::parse_domain(t.at("domain").get<std::string>());
    const auto equation = fem::parse_equation(t.at("equation").get<std::string>());
    const auto qb = saddle::parse_qb(t.at("qb").get<std::string>());
    const auto table_omega = number_or_empty(t, "omega");
    std::vector<ReferenceCell> cells;
    for (const auto& row : t.at("rows")) {
        for (const auto& name : t.at("methods")) {
            const auto key = name.get<std::string>();
            if (!row.at("counts").contains(key)) continue;
            ReferenceCell c;
            c.table = table;
            c.problem = domain;
            c.equation = equation;
            c.nu = row.at("nu").get<double>();
            c.grid = row.at("grid").get<std::size_t>();
            c.method = parse_method(key);
            c.window = row.contains("window") ? row.at("window").get<std::size_t>() : t.at("window").get<std::size_t>();
            if (c.method == Method::RDF) {
                c.beta = number_or_empty(row, "beta");
            } else {
                c.omega = number_or_empty(row, "omega");
                if (!c.omega) c.omega = table_omega;
                c.qb = qb;
            }
            c.reported = reported_text(row.at("counts").at(key));
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

std::optional<double> reference_omega(fem::Domain d, fem::Equation e, double nu, std::size_t grid)
{
    for (int id = 1; id <= reference_table_count(); ++id)
        for (const auto& c : reference_cells(id))
            if (c.problem == d && c.equation == e && c.grid == grid && same_nu(c.nu, nu) && c.omega) return c.omega;
    return std::nullopt;
}

std::optional<double> reference_beta(fem::Domain d, fem::Equation e, double nu, std::size_t grid)
{
    for (int id = 1; id <= reference_table_count(); ++id)
        for (const auto& c : reference_cells(id))
            if (c.problem == d && c.equation == e && c.grid == grid && same_nu(c.nu, nu) && c.beta) return c.beta;
    return std::nullopt;
}

TableSummary run_table(int table, const TableOptions& opts)
{
    TableSummary summary;
    summary.table = table;
    summary.title = reference_table_title(table);

    std::map<std::pair<double, std::size_t>, fem::SaddleSystem> systems;
    std::map<std::pair<double, std::size_t>, double> auto_omega;

    for (const auto& ref : reference_cells(table)) {
        if (ref.grid > opts.max_grid) continue;
        TableCellResult cell;
        cell.reference = ref;

        ExperimentConfig cfg;
        cfg.problem = ref.problem;
        cfg.equation = ref.equation;
        cfg.nu = ref.nu;
        cfg.grid = ref.grid;
        cfg.method = ref.method;
        cfg.window = ref.window;
        cfg.omega = ref.omega;
        cfg.beta = ref.beta;
        cfg.qb = ref.qb;
        cfg.inner = opts.inner;
        if (cfg.method == Method::NASU || cfg.method == Method::ASU) cfg.qb.reset();
        cell.record.config = cfg;

        if (cfg.method == Method::RDF && !cfg.beta) {
            cell.skipped = true;
            cell.note = "no published beta";
        } else if (cfg.method != Method::RDF && !cfg.omega && cfg.equation == fem::Equation::Oseen) {
            cell.skipped = true;
            cell.note = "no published omega";
        } else {
            const auto key = std::make_pair(ref.nu, ref.grid);
            auto it = systems.find(key);
            if (it == systems.end()) it = systems.emplace(key, assemble_problem(cfg)).first;
            if (cfg.method != Method::RDF && !cfg.omega) {
                // Auto omega is a property of the row's Schur complement and Q_B.
                const auto qkey = std::make_pair(static_cast<double>(cfg.effective_qb()), ref.grid);
                auto oit = auto_omega.find(qkey);
                if (oit == auto_omega.end()) {
                    saddle::EigenOptions eo;
                    eo.qb = cfg.effective_qb();
                    eo.inner = opts.inner;
                    oit = auto_omega.emplace(qkey, saddle::estimate_schur_omega(it->second, eo).omega_opt).first;
                }
                cfg.omega = oit->second;
            }
            cell.record = run_on_system(it->second, cfg);
            cell.record.grid_label = fem::build_grid(ref.problem, ref.grid).label();
            if (const auto rep = parse_count(ref.reported);
                rep && cell.record.status == accel::Status::Converged)
                cell.deviation = static_cast<long>(cell.record.iterations) - *rep;
        }
        if (opts.progress) opts.progress(cell);
        summary.cells.push_back(std::move(cell));
    }
    return summary;
}

} // namespace uzawa::bench
