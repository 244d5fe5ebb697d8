#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mufourier/scenario.hpp"

namespace py = pybind11;
using namespace mufourier;

namespace {

std::vector<double> to_point(const std::vector<double>& p) { return p; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted orthogonal expansions, Parseval checks, and integral "
            "inequalities over bounded measurable regions.";

  py::register_exception<ParseError>(m, "ExprParseError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<ScalarField>(m, "ScalarField")
      .def_property_readonly("dim", &ScalarField::dim)
      .def("__call__",
           [](const ScalarField& f, const std::vector<double>& p) {
             auto pt = to_point(p);
             return f(pt);
           })
      .def("describe", &ScalarField::describe)
      .def_property_readonly("lower", [](const ScalarField& f) { return f.lower; })
      .def_property_readonly("upper", [](const ScalarField& f) { return f.upper; })
      .def_property_readonly("positivity_floor",
                             [](const ScalarField& f) { return f.positivity_floor; })
      .def("with_bounds", &ScalarField::with_bounds, py::arg("lo"), py::arg("hi"))
      .def("with_floor", &ScalarField::with_floor, py::arg("floor"))
      .def("__add__", [](const ScalarField& a, const ScalarField& b) { return a + b; })
      .def("__sub__", [](const ScalarField& a, const ScalarField& b) { return a - b; })
      .def("__mul__", [](const ScalarField& a, const ScalarField& b) { return a * b; })
      .def("__truediv__",
           [](const ScalarField& a, const ScalarField& b) { return a / b; })
      .def("__neg__", [](const ScalarField& a) { return -a; })
      .def("__repr__",
           [](const ScalarField& f) { return "<ScalarField " + f.describe() + ">"; });

  py::class_<Predicate>(m, "Predicate")
      .def_property_readonly("dim", &Predicate::dim)
      .def("__call__",
           [](const Predicate& pred, const std::vector<double>& p) {
             auto pt = to_point(p);
             return pred(pt);
           })
      .def("describe", &Predicate::describe);

  m.def("parse_field", &parse_field, py::arg("source"), py::arg("dim"));
  m.def("parse_predicate", &parse_predicate, py::arg("source"), py::arg("dim"));
  m.def("constant", &constant, py::arg("dim"), py::arg("value"));
  m.def("scale", &scale, py::arg("c"), py::arg("f"));
  m.def("square", &square, py::arg("f"));
  m.def("reciprocal", &reciprocal, py::arg("f"));
  m.def("masked", &masked, py::arg("f"), py::arg("region"));

  py::class_<Box>(m, "Box")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lo"),
           py::arg("hi"))
      .def_readonly("lo", &Box::lo)
      .def_readonly("hi", &Box::hi)
      .def_property_readonly("dim", &Box::dim)
      .def("volume", &Box::volume)
      .def("center", &Box::center)
      .def("contains", [](const Box& b, const std::vector<double>& p) {
        auto pt = to_point(p);
        return b.contains(pt);
      });

  py::class_<Region>(m, "Region")
      .def_property_readonly("dim", &Region::dim)
      .def_property_readonly("bounds", &Region::bounds)
      .def("contains",
           [](const Region& r, const std::vector<double>& p) {
             auto pt = to_point(p);
             return r.contains(pt);
           })
      .def("describe", &Region::describe)
      .def("__repr__", [](const Region& r) { return "<Region " + r.describe() + ">"; });

  m.def("box_region", [](const Box& b) { return Region::box(b); }, py::arg("box"));
  m.def("ball_region", &Region::ball, py::arg("center"), py::arg("radius"));
  m.def("predicate_region", &Region::predicate, py::arg("bounds"), py::arg("membership"));
  m.def("region_union", &region_union);
  m.def("region_intersection", &region_intersection);
  m.def("region_difference", &region_difference);

  py::enum_<Method>(m, "Method")
      .value("refine", Method::refine)
      .value("stochastic", Method::stochastic);

  py::class_<IntegratorSettings>(m, "IntegratorSettings")
      .def(py::init([](Method method, double rel_tol, double abs_tol, int max_depth,
                       long samples, std::uint64_t seed, bool strict) {
             IntegratorSettings s;
             s.method = method;
             s.rel_tol = rel_tol;
             s.abs_tol = abs_tol;
             s.max_depth = max_depth;
             s.sample_count = samples;
             s.seed = seed;
             s.strict = strict;
             return s;
           }),
           py::arg("method") = Method::refine, py::arg("rel_tol") = 1e-6,
           py::arg("abs_tol") = 1e-9, py::arg("max_depth") = 0,
           py::arg("samples") = 32768, py::arg("seed") = 1, py::arg("strict") = false)
      .def_readwrite("method", &IntegratorSettings::method)
      .def_readwrite("rel_tol", &IntegratorSettings::rel_tol)
      .def_readwrite("abs_tol", &IntegratorSettings::abs_tol)
      .def_readwrite("max_depth", &IntegratorSettings::max_depth)
      .def_readwrite("samples", &IntegratorSettings::sample_count)
      .def_readwrite("seed", &IntegratorSettings::seed)
      .def_readwrite("strict", &IntegratorSettings::strict);

  py::class_<IntegralEstimate>(m, "IntegralEstimate")
      .def_readonly("value", &IntegralEstimate::value)
      .def_readonly("err", &IntegralEstimate::err)
      .def_readonly("evals", &IntegralEstimate::evals)
      .def_readonly("method", &IntegralEstimate::method)
      .def_readonly("seed", &IntegralEstimate::seed)
      .def("__repr__", [](const IntegralEstimate& e) {
        std::ostringstream os;
        os << "<IntegralEstimate " << format_double(e.value) << " +- "
           << format_double(e.err) << ">";
        return os.str();
      });

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("err", &Estimate::err)
      .def("__repr__", [](const Estimate& e) {
        std::ostringstream os;
        os << "<Estimate " << format_double(e.value) << " +- " << format_double(e.err)
           << ">";
        return os.str();
      });

  m.def("integrate", &integrate, py::arg("f"), py::arg("region"),
        py::arg("settings") = IntegratorSettings{});
  m.def("inner_product", &inner_product, py::arg("u"), py::arg("v"), py::arg("w"),
        py::arg("region"), py::arg("settings") = IntegratorSettings{});

  py::class_<SignedCell>(m, "SignedCell")
      .def_readonly("box", &SignedCell::box)
      .def_readonly("sign", &SignedCell::sign)
      .def_readonly("region", &SignedCell::region)
      .def_readonly("min_abs_f", &SignedCell::min_abs_f)
      .def_readonly("max_abs_f", &SignedCell::max_abs_f);

  py::class_<SignPartition>(m, "SignPartition")
      .def(py::init([](const Region& parent, double zeta,
                       const std::vector<std::pair<Box, int>>& cells) {
             SignPartition P;
             P.parent = parent;
             P.zeta = zeta;
             for (const auto& [b, sign] : cells) {
               SignedCell c;
               c.box = b;
               c.sign = sign;
               c.region = region_intersection(Region::box(b), parent);
               P.cells.push_back(std::move(c));
             }
             return P;
           }),
           py::arg("parent"), py::arg("zeta"), py::arg("cells"),
           "Assemble a partition from (box, sign) cells")
      .def_readonly("parent", &SignPartition::parent)
      .def_readonly("zeta", &SignPartition::zeta)
      .def_readonly("cells", &SignPartition::cells)
      .def_readonly("unresolved", &SignPartition::unresolved)
      .def_readonly("unresolved_volume", &SignPartition::unresolved_volume)
      .def("claimant", [](const SignPartition& P, const std::vector<double>& p) {
        auto pt = to_point(p);
        return P.claimant(pt);
      });

  m.def("sign_partition", &sign_partition, py::arg("f"), py::arg("region"),
        py::arg("max_depth"), py::arg("zeta"), py::arg("seed") = 1);
  m.def("default_zeta", &default_zeta, py::arg("f"));

  py::class_<OrthogonalFamily>(m, "OrthogonalFamily")
      .def_readonly("region", &OrthogonalFamily::region)
      .def_readonly("weight", &OrthogonalFamily::weight)
      .def_readonly("members", &OrthogonalFamily::members)
      .def_readonly("norms", &OrthogonalFamily::norms)
      .def_readonly("residual", &OrthogonalFamily::residual)
      .def_readonly("dropped", &OrthogonalFamily::dropped)
      .def("__len__", [](const OrthogonalFamily& f) { return f.members.size(); });

  m.def(
      "gram_schmidt",
      [](const std::vector<ScalarField>& seeds, const ScalarField& w, const Region& E,
         const IntegratorSettings& s, double drop_rel, double ortho_tol) {
        GramSchmidtOptions opt;
        opt.drop_rel = drop_rel;
        opt.ortho_tol = ortho_tol;
        return gram_schmidt(seeds, w, E, s, opt);
      },
      py::arg("seeds"), py::arg("weight"), py::arg("region"),
      py::arg("settings") = IntegratorSettings{}, py::arg("drop_rel") = 1e-10,
      py::arg("ortho_tol") = 1e-6);
  m.def("orthogonality_residual", &orthogonality_residual, py::arg("family"),
        py::arg("settings") = IntegratorSettings{});
  m.def(
      "make_family",
      [](const std::vector<ScalarField>& members, const ScalarField& w, const Region& E,
         const IntegratorSettings& s) { return make_family(members, w, E, s); },
      py::arg("members"), py::arg("weight"), py::arg("region"),
      py::arg("settings") = IntegratorSettings{});

  py::class_<CoefficientEstimate>(m, "CoefficientEstimate")
      .def_readonly("value", &CoefficientEstimate::value)
      .def_readonly("err", &CoefficientEstimate::err)
      .def_readonly("numerator", &CoefficientEstimate::numerator)
      .def_readonly("denominator", &CoefficientEstimate::denominator);

  m.def("fourier_coefficient", &fourier_coefficient, py::arg("phi"), py::arg("f"),
        py::arg("region"), py::arg("settings") = IntegratorSettings{});

  py::class_<Expansion>(m, "Expansion")
      .def_readonly("f", &Expansion::f)
      .def_readonly("family", &Expansion::family)
      .def_readonly("coeffs", &Expansion::coeffs)
      .def("partial_sum", &Expansion::partial_sum, py::arg("N"))
      .def("__len__", [](const Expansion& X) { return X.coeffs.size(); });

  m.def("expand", &expand, py::arg("f"), py::arg("family"),
        py::arg("settings") = IntegratorSettings{});
  m.def("mean_square_deviation", &mean_square_deviation, py::arg("expansion"),
        py::arg("N"), py::arg("settings") = IntegratorSettings{});
  m.def(
      "mean_square_deviation_with",
      [](const Expansion& X, const std::vector<double>& coeffs, int N,
         const IntegratorSettings& s) {
        return mean_square_deviation_with(X, coeffs, N, s);
      },
      py::arg("expansion"), py::arg("coeffs"), py::arg("N"),
      py::arg("settings") = IntegratorSettings{});
  m.def("bessel_gap", &bessel_gap, py::arg("expansion"), py::arg("N"),
        py::arg("settings") = IntegratorSettings{});
  m.def("parseval_residual", &parseval_residual, py::arg("expansion"),
        py::arg("settings") = IntegratorSettings{});

  py::class_<CellReport>(m, "CellReport")
      .def_readonly("cell_id", &CellReport::cell_id)
      .def_readonly("sign", &CellReport::sign)
      .def_readonly("coefficients", &CellReport::coefficients)
      .def_readonly("coefficient_errs", &CellReport::coefficient_errs)
      .def_readonly("cell_parseval", &CellReport::cell_parseval)
      .def_readonly("cell_integral", &CellReport::cell_integral);

  py::class_<PartitionReport>(m, "PartitionReport")
      .def_readonly("cells", &PartitionReport::cells)
      .def_readonly("total", &PartitionReport::total)
      .def_readonly("direct_integral", &PartitionReport::direct_integral)
      .def_readonly("discrepancy", &PartitionReport::discrepancy)
      .def_readonly("unresolved_volume", &PartitionReport::unresolved_volume)
      .def_readonly("unresolved_bound", &PartitionReport::unresolved_bound);

  m.def("partitioned_parseval", &partitioned_parseval, py::arg("f"),
        py::arg("partition"),
        py::arg("seed_sets") = std::vector<std::vector<ScalarField>>{},
        py::arg("settings") = IntegratorSettings{});

  py::enum_<Relation>(m, "Relation").value("LE", Relation::LE).value("GE", Relation::GE);
  py::enum_<Verdict>(m, "Verdict")
      .value("holds", Verdict::Holds)
      .value("fails", Verdict::Fails)
      .value("indeterminate", Verdict::Indeterminate);

  py::class_<Comparison>(m, "Comparison")
      .def_readonly("rel", &Comparison::rel)
      .def_readonly("lhs", &Comparison::lhs)
      .def_readonly("lhs_err", &Comparison::lhs_err)
      .def_readonly("rhs", &Comparison::rhs)
      .def_readonly("rhs_err", &Comparison::rhs_err)
      .def_readonly("slack", &Comparison::slack)
      .def_readonly("margin", &Comparison::margin)
      .def_readonly("holds", &Comparison::holds)
      .def_readonly("verdict", &Comparison::verdict)
      .def("__repr__", [](const Comparison& c) {
        std::ostringstream os;
        os << "<Comparison " << format_double(c.lhs)
           << (c.rel == Relation::LE ? " <= " : " >= ") << format_double(c.rhs) << " : "
           << verdict_name(c.verdict) << ">";
        return os.str();
      });

  m.def("cauchy_schwarz_gap", &cauchy_schwarz_gap, py::arg("g"), py::arg("h"),
        py::arg("region"), py::arg("settings") = IntegratorSettings{});

  py::class_<PairRecord>(m, "PairRecord")
      .def_readonly("n", &PairRecord::n)
      .def_readonly("m", &PairRecord::m)
      .def_readonly("crit_a", &PairRecord::crit_a)
      .def_readonly("crit_b", &PairRecord::crit_b);

  py::class_<CriterionDiagnostics>(m, "CriterionDiagnostics")
      .def_readonly("product_deviation", &CriterionDiagnostics::product_deviation)
      .def_readonly("expanded_form", &CriterionDiagnostics::expanded_form)
      .def_readonly("after_term_bound", &CriterionDiagnostics::after_term_bound)
      .def_readonly("bessel_double_sum", &CriterionDiagnostics::bessel_double_sum)
      .def_readonly("chain", &CriterionDiagnostics::chain)
      .def_readonly("double_bessel", &CriterionDiagnostics::double_bessel);

  py::class_<CriterionReport>(m, "CriterionReport")
      .def_readonly("truncation", &CriterionReport::truncation)
      .def_readonly("grid", &CriterionReport::grid)
      .def_readonly("c", &CriterionReport::c)
      .def_readonly("d", &CriterionReport::d)
      .def_readonly("conclusion", &CriterionReport::conclusion)
      .def_readonly("measure", &CriterionReport::measure)
      .def_readonly("all_flags_hold", &CriterionReport::all_flags_hold)
      .def_readonly("all_flags_decisive", &CriterionReport::all_flags_decisive)
      .def_readonly("diagnostics", &CriterionReport::diagnostics);

  m.def("product_criterion_check", &product_criterion_check, py::arg("f"), py::arg("g"),
        py::arg("phi"), py::arg("psi"), py::arg("N"), py::arg("region"),
        py::arg("settings") = IntegratorSettings{}, py::arg("diagnostics") = false);

  py::class_<CorollaryRecord>(m, "CorollaryRecord")
      .def_readonly("n", &CorollaryRecord::n)
      .def_readonly("m", &CorollaryRecord::m)
      .def_readonly("cs_bound", &CorollaryRecord::cs_bound)
      .def_readonly("certified", &CorollaryRecord::certified);

  py::class_<CorollaryReport>(m, "CorollaryReport")
      .def_readonly("truncation", &CorollaryReport::truncation)
      .def_readonly("phi_subcond", &CorollaryReport::phi_subcond)
      .def_readonly("psi_subcond", &CorollaryReport::psi_subcond)
      .def_readonly("grid", &CorollaryReport::grid);

  m.def("corollary_check", &corollary_check, py::arg("f"), py::arg("g"), py::arg("phi"),
        py::arg("psi"), py::arg("N"), py::arg("region"),
        py::arg("settings") = IntegratorSettings{});

  m.def(
      "run_scenario_text",
      [](const std::string& text) {
        Scenario sc = parse_scenario_text(text);
        RunOutput out = run_scenario(sc);
        return py::make_tuple(out.exit_code, out.report.dump(2), out.summary, out.csv);
      },
      py::arg("text"),
      "Parse and run a scenario; returns (exit_code, report_json, summary, csv)");
  m.def(
      "run_scenario_file",
      [](const std::string& path) {
        Scenario sc = parse_scenario_file(path);
        RunOutput out = run_scenario(sc);
        return py::make_tuple(out.exit_code, out.report.dump(2), out.summary, out.csv);
      },
      py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
