#include "uzawa/accel/anderson.hpp"
#include "uzawa/bench/record_io.hpp"
#include "uzawa/bench/tables.hpp"
#include "uzawa/fem/export.hpp"
#include "uzawa/saddle/eigen_estimate.hpp"
#include "uzawa/saddle/methods.hpp"
#include "uzawa/saddle/rdf.hpp"
#include "uzawa/saddle/uzawa.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace uzawa;
using la::Vector;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Vector& v)
{
    Array a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

Vector to_vector(const Array& a)
{
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return Vector(a.data(), a.data() + a.size());
}

/// (data, indices, indptr, shape), the scipy.sparse.csr_matrix constructor tuple.
py::tuple csr(const la::SparseMatrix& m)
{
    const auto vals = m.values();
    const auto cols = m.col_indices();
    const auto rows = m.row_offsets();
    py::array_t<double> data(static_cast<py::ssize_t>(vals.size()));
    py::array_t<std::int64_t> indices(static_cast<py::ssize_t>(cols.size()));
    py::array_t<std::int64_t> indptr(static_cast<py::ssize_t>(rows.size()));
    std::copy(vals.begin(), vals.end(), data.mutable_data());
    std::copy(cols.begin(), cols.end(), indices.mutable_data());
    std::copy(rows.begin(), rows.end(), indptr.mutable_data());
    return py::make_tuple(data, indices, indptr, py::make_tuple(m.rows(), m.cols()));
}

la::SparseMatrix from_csr(const py::tuple& t)
{
    if (t.size() != 4) throw std::invalid_argument("expected (data, indices, indptr, shape)");
    const auto data = t[0].cast<Array>();
    const auto indices = t[1].cast<py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>>();
    const auto indptr = t[2].cast<py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>>();
    const auto shape = t[3].cast<std::pair<std::size_t, std::size_t>>();
    std::vector<la::Triplet> trip;
    for (std::size_t i = 0; i < shape.first; ++i)
        for (auto k = indptr.at(i); k < indptr.at(i + 1); ++k)
            trip.push_back({i, static_cast<std::size_t>(indices.at(k)), data.at(k)});
    return la::SparseMatrix::from_triplets(shape.first, shape.second, std::move(trip));
}

fem::SaddleSystem system_from(const std::string& problem, const std::string& equation, double nu, std::size_t grid,
                              std::size_t picard_steps)
{
    bench::ExperimentConfig c;
    c.problem = fem::parse_domain(problem);
    c.equation = fem::parse_equation(equation);
    c.nu = nu;
    c.grid = grid;
    c.picard_steps = picard_steps;
    return bench::assemble_problem(c);
}

bench::ExperimentConfig make_config(const std::string& problem, const std::string& equation, double nu,
                                    std::size_t grid, const std::string& method, std::size_t window,
                                    std::optional<double> omega, std::optional<double> beta,
                                    std::optional<std::string> qb, double tol, std::size_t max_iters,
                                    const std::string& inner, std::size_t picard_steps)
{
    bench::ExperimentConfig c;
    c.problem = fem::parse_domain(problem);
    c.equation = fem::parse_equation(equation);
    c.nu = nu;
    c.grid = grid;
    c.method = bench::parse_method(method);
    c.window = window;
    c.omega = omega;
    c.beta = beta;
    if (qb) c.qb = saddle::parse_qb(*qb);
    c.tol = tol;
    c.max_iters = max_iters;
    c.inner = saddle::parse_inner_method(inner);
    c.picard_steps = picard_steps;
    return c;
}

py::dict record_dict(const bench::RunRecord& r)
{
    return py::module_::import("json").attr("loads")(bench::record_to_json(r));
}

saddle::UzawaConfig uzawa_config(double omega, const std::string& qb, std::optional<py::tuple> qa)
{
    saddle::UzawaConfig c;
    c.omega = omega;
    c.qb = saddle::parse_qb(qb);
    if (qa) {
        c.qa = saddle::QaKind::GivenMatrix;
        c.qa_matrix = from_csr(*qa);
    }
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Uzawa-type saddle-point solvers with Anderson acceleration";

    py::register_exception<la::SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<la::DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::class_<fem::SaddleSystem>(m, "SaddleSystem")
        .def_property_readonly("problem", [](const fem::SaddleSystem& s) { return std::string(fem::to_string(s.domain)); })
        .def_property_readonly("equation", [](const fem::SaddleSystem& s) { return std::string(fem::to_string(s.equation)); })
        .def_readonly("nu", &fem::SaddleSystem::nu)
        .def_readonly("grid", &fem::SaddleSystem::grid_n)
        .def_property_readonly("num_velocity", &fem::SaddleSystem::num_velocity)
        .def_property_readonly("num_pressure", &fem::SaddleSystem::num_pressure)
        .def_property_readonly("size", &fem::SaddleSystem::size)
        .def_property_readonly("A", [](const fem::SaddleSystem& s) { return csr(s.A); })
        .def_property_readonly("B", [](const fem::SaddleSystem& s) { return csr(s.B); })
        .def_property_readonly("Mp", [](const fem::SaddleSystem& s) { return csr(s.Mp); })
        .def_property_readonly("f", [](const fem::SaddleSystem& s) { return to_array(s.f); })
        .def_property_readonly("g", [](const fem::SaddleSystem& s) { return to_array(s.g); })
        .def_property_readonly("Mv_diag", [](const fem::SaddleSystem& s) { return to_array(s.Mv_diag); })
        .def("has_pressure_nullspace", [](const fem::SaddleSystem& s) { return s.has_pressure_nullspace(); })
        .def("residual", [](const fem::SaddleSystem& s, const Array& xi) { return to_array(s.residual(to_vector(xi))); },
             py::arg("xi"), "b - K xi for the stacked iterate (u, p)")
        .def("__repr__", [](const fem::SaddleSystem& s) {
            return "<SaddleSystem " + std::string(fem::to_string(s.domain)) + " " +
                   std::string(fem::to_string(s.equation)) + " n=" + std::to_string(s.grid_n) +
                   " unknowns=" + std::to_string(s.size()) + ">";
        });

    m.def("assemble", &system_from, py::arg("problem") = "channel", py::arg("equation") = "stokes",
          py::arg("nu") = 1.0, py::arg("grid") = 16, py::arg("picard_steps") = 5,
          "Assemble a benchmark saddle system (Oseen winds come from Picard iteration).");

    m.def("saddle_system",
          [](const py::tuple& a, const py::tuple& b, const Array& f, const Array& g, std::optional<py::tuple> mp,
             std::optional<Array> mv) {
              fem::SaddleSystem s;
              s.A = from_csr(a);
              s.B = from_csr(b);
              s.f = to_vector(f);
              s.g = to_vector(g);
              la::require_size(s.f.size(), s.A.rows(), "f");
              la::require_size(s.g.size(), s.B.rows(), "g");
              la::require_size(s.B.cols(), s.A.rows(), "B columns");
              s.Mp = mp ? from_csr(*mp) : la::SparseMatrix::identity(s.B.rows());
              s.Mv_diag = mv ? to_vector(*mv) : Vector(s.A.rows(), 1.0);
              s.equation = saddle::is_symmetric(s.A) ? fem::Equation::Stokes : fem::Equation::Oseen;
              s.dirichlet.fixed.assign(s.A.rows(), 0);
              s.dirichlet.values.assign(s.A.rows(), 0.0);
              return s;
          },
          py::arg("A"), py::arg("B"), py::arg("f"), py::arg("g"), py::arg("Mp") = py::none(),
          py::arg("Mv_diag") = py::none(), "Build a system from CSR tuples (data, indices, indptr, shape).");

    m.def("num_unknowns", [](const std::string& problem, std::size_t n) {
        return fem::build_grid(fem::parse_domain(problem), n).num_unknowns();
    }, py::arg("problem"), py::arg("grid"));

    m.def("uzawa_step",
          [](const fem::SaddleSystem& sys, const Array& u, const Array& p, double omega, const std::string& qb,
             std::optional<py::tuple> qa) {
              const auto [u1, p1] = saddle::uzawa_step(sys, uzawa_config(omega, qb, qa), to_vector(u), to_vector(p));
              return py::make_tuple(to_array(u1), to_array(p1));
          },
          py::arg("system"), py::arg("u"), py::arg("p"), py::arg("omega") = 1.0, py::arg("qb") = "identity",
          py::arg("qa") = py::none(), "One preconditioned Uzawa step; qa=None means Q_A = A.");

    m.def("fixed_point_map",
          [](const fem::SaddleSystem& sys, double omega, const std::string& qb, std::optional<py::tuple> qa) {
              const saddle::PreconditionedUzawa uz(sys, uzawa_config(omega, qb, qa));
              return py::cpp_function([uz](const Array& xi) { return to_array(uz.evaluate(to_vector(xi))); });
          },
          py::arg("system"), py::arg("omega") = 1.0, py::arg("qb") = "identity", py::arg("qa") = py::none(),
          "The Uzawa map G as a Python callable on stacked (u, p) arrays.");

    m.def("schur_solve",
          [](const fem::SaddleSystem& sys, const std::string& qb, double tol) {
              const auto r = saddle::schur_solve_route(sys, uzawa_config(1.0, qb, std::nullopt), tol);
              return py::make_tuple(to_array(r.u), to_array(r.p), r.report.iterations);
          },
          py::arg("system"), py::arg("qb") = "mass", py::arg("tol") = 1e-10,
          "Direct route through the pressure Schur complement; returns (u, p, iterations).");

    m.def("lsc_apply",
          [](const fem::SaddleSystem& sys, const Array& r, double inner_tol) {
              return to_array(saddle::lsc_apply(sys, to_vector(r), inner_tol));
          },
          py::arg("system"), py::arg("r"), py::arg("inner_tol") = 1e-10);

    m.def("estimate_omega",
          [](const fem::SaddleSystem& sys, const std::string& qb, double rel_tol) {
              saddle::EigenOptions o;
              o.qb = saddle::parse_qb(qb);
              o.rel_tol = rel_tol;
              const auto e = saddle::estimate_schur_omega(sys, o);
              py::dict d;
              d["lambda_min"] = e.lambda_min;
              d["lambda_max"] = e.lambda_max;
              d["omega"] = e.omega_opt;
              d["lanczos_steps"] = e.lanczos_steps;
              return d;
          },
          py::arg("system"), py::arg("qb") = "identity", py::arg("rel_tol") = 1e-4);

    m.def("rdf_matrix", [](const fem::SaddleSystem& sys, double beta) { return csr(saddle::rdf_matrix(sys, beta)); },
          py::arg("system"), py::arg("beta"));
    m.def("rdf_factors",
          [](const fem::SaddleSystem& sys, double beta) {
              py::list out;
              for (const auto& f : saddle::rdf_factors(sys, beta)) out.append(csr(f));
              return out;
          },
          py::arg("system"), py::arg("beta"));

    py::class_<accel::AndersonAccelerator>(m, "AndersonAccelerator")
        .def(py::init<std::size_t>(), py::arg("depth"))
        .def("update",
             [](accel::AndersonAccelerator& a, const Array& xi, const Array& g_xi) {
                 return to_array(a.update(to_vector(xi), to_vector(g_xi)));
             },
             py::arg("xi"), py::arg("g_xi"), "Given xi_k and G(xi_k), return xi_{k+1}.")
        .def("reset", &accel::AndersonAccelerator::reset)
        .def_property_readonly("depth", &accel::AndersonAccelerator::depth)
        .def_property_readonly("window_size", &accel::AndersonAccelerator::window_size)
        .def_property_readonly("steps", &accel::AndersonAccelerator::steps)
        .def_property_readonly("coefficients", [](const accel::AndersonAccelerator& a) { return to_array(a.coefficients()); });

    m.def("aa_solve",
          [](const py::function& g, const Array& x0, std::size_t m_depth, double tol, std::size_t max_iters) {
              const Vector start = to_vector(x0);
              const accel::FixedPointMap map{start.size(), [&g](std::span<const double> x) {
                                                 return to_vector(g(to_array(Vector(x.begin(), x.end()))).cast<Array>());
                                             }};
              accel::IterationOptions o;
              o.tol = tol;
              o.max_iters = max_iters;
              const auto r = m_depth == 0 ? accel::fixed_point_solve(map, start, o) : accel::aa_solve(map, start, m_depth, o);
              return py::make_tuple(to_array(r.solution), std::string(accel::to_string(r.status)), r.report.iterations);
          },
          py::arg("g"), py::arg("x0"), py::arg("m") = 5, py::arg("tol") = 1e-6, py::arg("max_iters") = 1000,
          "Anderson-accelerated fixed-point iteration (m=0 for plain iteration); returns (x, status, iterations).");

    m.def("run_experiment",
          [](const std::string& problem, const std::string& equation, double nu, std::size_t grid,
             const std::string& method, std::size_t window, std::optional<double> omega, std::optional<double> beta,
             std::optional<std::string> qb, double tol, std::size_t max_iters, const std::string& inner,
             std::size_t picard_steps) {
              const auto c = make_config(problem, equation, nu, grid, method, window, omega, beta, qb, tol, max_iters,
                                         inner, picard_steps);
              bench::RunRecord r;
              {
                  py::gil_scoped_release release;
                  r = bench::run_experiment(c);
              }
              return record_dict(r);
          },
          py::arg("problem") = "channel", py::arg("equation") = "stokes", py::arg("nu") = 1.0, py::arg("grid") = 16,
          py::arg("method") = "APU", py::arg("window") = 20, py::arg("omega") = py::none(),
          py::arg("beta") = py::none(), py::arg("qb") = py::none(), py::arg("tol") = 1e-6,
          py::arg("max_iters") = 1000, py::arg("inner") = "direct", py::arg("picard_steps") = 5,
          "Run one benchmark experiment and return its record as a dict.");

    m.def("run_table",
          [](int table, std::size_t max_grid) {
              bench::TableOptions o;
              o.max_grid = max_grid;
              bench::TableSummary t;
              {
                  py::gil_scoped_release release;
                  t = bench::run_table(table, o);
              }
              return py::module_::import("json").attr("loads")(bench::table_to_json(t));
          },
          py::arg("table"), py::arg("max_grid") = 64);

    m.def("record_csv",
          [](const py::dict& record) {
              const std::string text = py::module_::import("json").attr("dumps")(record).cast<std::string>();
              return bench::record_to_csv(bench::record_from_json(text));
          },
          py::arg("record"), "CSV convergence history (iter,relative_residual) of a record dict.");

    m.def("export_system",
          [](const std::string& problem, std::size_t grid, const std::filesystem::path& dir) {
              const auto g = fem::build_grid(fem::parse_domain(problem), grid);
              fem::export_system(g, fem::assemble(g, {}), dir);
          },
          py::arg("problem"), py::arg("grid"), py::arg("directory"), "Write the Stokes system as Matrix Market files.");
}
