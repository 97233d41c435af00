#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcount/analytics.hpp"
#include "fcount/common.hpp"
#include "fcount/distributions.hpp"
#include "fcount/governing.hpp"
#include "fcount/processes.hpp"
#include "fcount/rates.hpp"
#include "fcount/rng.hpp"
#include "fcount/sampling.hpp"
#include "fcount/specfun.hpp"

namespace py = pybind11;

using namespace fcount;

namespace {

std::vector<double> as_vector(const py::array_t<double, py::array::c_style |
                                                            py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

processes::ProcessSpec make_spec(const std::string& family, int k, py::object rho,
                                 py::object alpha, py::object lam, py::object rate) {
    processes::ProcessSpec spec;
    spec.family = processes::family_from_string(family);
    spec.k = k;
    if (!rho.is_none()) spec.rho = rho.cast<double>();
    if (!alpha.is_none()) spec.alpha = alpha.cast<double>();
    if (!lam.is_none()) spec.lam = lam.cast<double>();
    if (!rate.is_none()) spec.rate = rate.cast<rates::RateFunction>();
    spec.validate();
    return spec;
}

py::dict report_to_dict(const analytics::MomentReport& r) {
    py::dict d;
    d["mean"] = r.mean;
    d["variance"] = r.variance;
    if (r.covariance) d["covariance"] = *r.covariance;
    if (r.se_mean) d["se_mean"] = *r.se_mean;
    if (r.se_variance) d["se_variance"] = *r.se_variance;
    if (r.se_covariance) d["se_covariance"] = *r.se_covariance;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Counting processes of order k: Poisson and Polya-Aeppli families in "
              "homogeneous, non-homogeneous, fractional and fractional non-homogeneous "
              "variants, with exact marginals, samplers, moments and governing-equation "
              "solvers.";
    m.attr("__version__") = FCOUNT_VERSION;

    // ---- special functions ----
    m.def("log_gamma", &specfun::log_gamma, py::arg("x"));
    m.def(
        "mittag_leffler",
        [](double alpha, double beta, double z) {
            return specfun::mittag_leffler(alpha, beta, z);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("z"));
    m.def(
        "prabhakar_ml",
        [](double alpha, double beta, double gamma, double z) {
            return specfun::prabhakar_ml(alpha, beta, gamma, z);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("z"));
    m.def(
        "stable_density",
        [](double alpha, double x) { return specfun::stable_density(alpha, x); },
        py::arg("alpha"), py::arg("x"));
    m.def(
        "inv_subordinator_density",
        [](double alpha, double t, double x) {
            return specfun::inv_subordinator_density(alpha, t, x);
        },
        py::arg("alpha"), py::arg("t"), py::arg("x"));
    m.def(
        "caputo_l1",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> grid,
           py::array_t<double, py::array::c_style | py::array::forcecast> values,
           double alpha) {
            GridFunction f{as_vector(grid), as_vector(values)};
            const auto d = specfun::caputo_l1(f, alpha);
            return py::make_tuple(to_array(d.grid), to_array(d.values));
        },
        py::arg("grid"), py::arg("values"), py::arg("alpha"),
        "L1 Caputo derivative on a uniform grid; returns (interior_grid, values).");

    // ---- rng / sampling ----
    py::class_<sampling::RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
             py::arg("stream_id") = 0)
        .def_property_readonly("seed", &sampling::RngStream::seed)
        .def_property_readonly("stream_id", &sampling::RngStream::stream_id)
        .def("uniform01", &sampling::RngStream::uniform01)
        .def("exponential", &sampling::RngStream::exponential, py::arg("mean") = 1.0);

    m.def("sample_uniform_k", &sampling::sample_uniform_k, py::arg("rng"), py::arg("k"));
    m.def("sample_trunc_geom", &sampling::sample_trunc_geom, py::arg("rng"), py::arg("rho"),
          py::arg("k"));
    m.def("sample_mittag_leffler", &sampling::sample_mittag_leffler, py::arg("rng"),
          py::arg("alpha"), py::arg("scale"));
    m.def("sample_pos_stable", &sampling::sample_pos_stable, py::arg("rng"), py::arg("alpha"));
    m.def("sample_inverse_subordinator_at", &sampling::sample_inverse_subordinator_at,
          py::arg("rng"), py::arg("alpha"), py::arg("t"));
    m.def(
        "sample_inverse_subordinator_path",
        [](sampling::RngStream& rng, double alpha,
           py::array_t<double, py::array::c_style | py::array::forcecast> grid, double step) {
            const auto g = as_vector(grid);
            return to_array(sampling::sample_inverse_subordinator_path(rng, alpha, g, step));
        },
        py::arg("rng"), py::arg("alpha"), py::arg("grid"), py::arg("step"));

    // ---- distributions ----
    py::class_<distributions::PmfVector>(m, "PmfVector")
        .def_property_readonly("probs",
                               [](const distributions::PmfVector& p) { return to_array(p.probs); })
        .def_readonly("m_max", &distributions::PmfVector::m_max)
        .def_readonly("tail_mass_bound", &distributions::PmfVector::tail_mass_bound)
        .def("mean", &distributions::PmfVector::mean)
        .def("total_mass", &distributions::PmfVector::total_mass);

    m.def("pmf_poisson_order_k", &distributions::pmf_poisson_order_k, py::arg("k"),
          py::arg("big_lambda"), py::arg("m_max"));
    m.def("pmf_polya_aeppli_order_k", &distributions::pmf_polya_aeppli_order_k, py::arg("k"),
          py::arg("rho"), py::arg("big_lambda"), py::arg("m_max"));
    m.def(
        "pmf_fppk",
        [](int k, double lam, double alpha, double t, int m_max) {
            return distributions::pmf_fppk(k, lam, alpha, t, m_max);
        },
        py::arg("k"), py::arg("lam"), py::arg("alpha"), py::arg("t"), py::arg("m_max"));
    m.def("pmf_nppk_increment", &distributions::pmf_nppk_increment, py::arg("k"),
          py::arg("mass"), py::arg("m_max"));
    m.def("pmf_polya_aeppli_increment", &distributions::pmf_polya_aeppli_increment,
          py::arg("k"), py::arg("rho"), py::arg("mass"), py::arg("m_max"));

    // ---- rates ----
    py::class_<rates::RateFunction>(m, "RateFunction")
        .def_static("constant", &rates::RateFunction::constant, py::arg("lam0"))
        .def_static("weibull", &rates::RateFunction::weibull, py::arg("b"), py::arg("c"))
        .def_static("makeham", &rates::RateFunction::makeham, py::arg("b"), py::arg("c"),
                    py::arg("mu"))
        .def_static("table", &rates::RateFunction::table, py::arg("knots"), py::arg("values"))
        .def_static("table_from_csv", &rates::RateFunction::table_from_csv, py::arg("path"))
        .def("rate_at", &rates::RateFunction::rate_at, py::arg("t"))
        .def("cum_mass",
             py::overload_cast<double, double>(&rates::RateFunction::cum_mass, py::const_),
             py::arg("s"), py::arg("t"))
        .def("cum_mass", py::overload_cast<double>(&rates::RateFunction::cum_mass, py::const_),
             py::arg("t"))
        .def("invert_cum_mass", &rates::RateFunction::invert_cum_mass, py::arg("y"))
        .def("describe", &rates::RateFunction::describe);

    // ---- processes ----
    py::class_<processes::SamplePath>(m, "SamplePath")
        .def_property_readonly(
            "event_times",
            [](const processes::SamplePath& p) { return to_array(p.event_times); })
        .def_property_readonly("jump_sizes",
                               [](const processes::SamplePath& p) { return p.jump_sizes; })
        .def_readonly("horizon", &processes::SamplePath::horizon)
        .def("count_at", &processes::SamplePath::count_at, py::arg("t"));

    m.def("simulate_ppk", &processes::simulate_ppk, py::arg("rng"), py::arg("k"),
          py::arg("lam"), py::arg("horizon"));
    m.def("simulate_pak", &processes::simulate_pak, py::arg("rng"), py::arg("k"),
          py::arg("rho"), py::arg("lam"), py::arg("horizon"));
    m.def("simulate_nppk", &processes::simulate_nppk, py::arg("rng"), py::arg("k"),
          py::arg("rate"), py::arg("horizon"));
    m.def("simulate_npak", &processes::simulate_npak, py::arg("rng"), py::arg("k"),
          py::arg("rho"), py::arg("rate"), py::arg("horizon"));
    m.def(
        "simulate_fppk",
        [](sampling::RngStream& rng, int k, double lam, double alpha,
           py::array_t<double, py::array::c_style | py::array::forcecast> grid,
           const std::string& method) {
            const auto g = as_vector(grid);
            const auto cg = processes::simulate_fppk(
                rng, k, lam, alpha, g,
                method == "timechange" ? processes::FppkMethod::timechange
                                       : processes::FppkMethod::renewal);
            return py::make_tuple(to_array(cg.grid), cg.counts);
        },
        py::arg("rng"), py::arg("k"), py::arg("lam"), py::arg("alpha"), py::arg("grid"),
        py::arg("method") = "renewal");
    m.def(
        "ensemble",
        [](std::uint64_t seed, const std::string& family, int k, py::object rho,
           py::object alpha, py::object lam, py::object rate, int n_paths,
           py::array_t<double, py::array::c_style | py::array::forcecast> grid) {
            const auto spec = make_spec(family, k, rho, alpha, lam, rate);
            const auto g = as_vector(grid);
            const auto e = processes::ensemble(seed, spec, n_paths, g);
            py::array_t<std::int64_t> counts({static_cast<py::ssize_t>(e.n_paths),
                                              static_cast<py::ssize_t>(e.grid.size())});
            std::copy(e.counts.begin(), e.counts.end(), counts.mutable_data());
            return py::make_tuple(to_array(e.grid), counts);
        },
        py::arg("seed"), py::arg("family"), py::arg("k"), py::arg("rho") = py::none(),
        py::arg("alpha") = py::none(), py::arg("lam") = py::none(),
        py::arg("rate") = py::none(), py::arg("n_paths") = 1, py::arg("grid"),
        "Simulate n_paths independent realizations; returns (grid, counts matrix).");

    // ---- analytics ----
    m.def("inv_sub_moment", &analytics::inv_sub_moment, py::arg("alpha"), py::arg("nu"),
          py::arg("t"));
    m.def("inv_sub_cov", &analytics::inv_sub_cov, py::arg("alpha"), py::arg("t"), py::arg("s"));
    m.def(
        "moments",
        [](const std::string& family, int k, py::object rho, py::object alpha, py::object lam,
           py::object rate, double t, py::object s) {
            const auto spec = make_spec(family, k, rho, alpha, lam, rate);
            std::optional<double> s_opt;
            if (!s.is_none()) s_opt = s.cast<double>();
            return report_to_dict(analytics::moments_for_spec(spec, t, s_opt));
        },
        py::arg("family"), py::arg("k"), py::arg("rho") = py::none(),
        py::arg("alpha") = py::none(), py::arg("lam") = py::none(),
        py::arg("rate") = py::none(), py::arg("t") = 1.0, py::arg("s") = py::none());
    m.def(
        "lrd_constant",
        [](const std::string& family, int k, double rho, double lam, double alpha, double s) {
            return analytics::lrd_constant(processes::family_from_string(family), k, rho, lam,
                                           alpha, s);
        },
        py::arg("family"), py::arg("k"), py::arg("rho"), py::arg("lam"), py::arg("alpha"),
        py::arg("s"));
    m.def(
        "correlation_curve",
        [](const std::string& family, int k, double rho, double lam, double alpha, double s,
           double t_lo, double t_hi, int n_points) {
            const auto c = analytics::correlation_curve(processes::family_from_string(family),
                                                        k, rho, lam, alpha, s, t_lo, t_hi,
                                                        n_points);
            return py::make_tuple(to_array(c.grid), to_array(c.values));
        },
        py::arg("family"), py::arg("k"), py::arg("rho"), py::arg("lam"), py::arg("alpha"),
        py::arg("s"), py::arg("t_lo"), py::arg("t_hi"), py::arg("n_points"));
    m.def(
        "lrd_fit",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> grid,
           py::array_t<double, py::array::c_style | py::array::forcecast> corr, double lo,
           double hi) {
            GridFunction c{as_vector(grid), as_vector(corr)};
            const auto rep = analytics::lrd_fit(c, lo, hi);
            py::dict d;
            d["fitted_exponent"] = rep.fitted_exponent;
            d["fitted_constant"] = rep.fitted_constant;
            d["residual"] = rep.residual;
            return d;
        },
        py::arg("grid"), py::arg("corr"), py::arg("fit_lo"), py::arg("fit_hi"));

    // ---- governing ----
    m.def(
        "solve_fractional_master",
        [](const std::string& family, int k, double rho, double lam, double alpha, int m_max,
           py::array_t<double, py::array::c_style | py::array::forcecast> grid) {
            governing::GeneratorSpec g;
            g.family = processes::family_from_string(family);
            g.k = k;
            g.rho = rho;
            g.lam = lam;
            g.alpha = alpha;
            g.m_max = m_max;
            const auto gv = as_vector(grid);
            const auto sol = governing::solve_fractional_master(g, gv);
            py::array_t<double> out({static_cast<py::ssize_t>(sol.size()),
                                     static_cast<py::ssize_t>(m_max + 1)});
            auto* ptr = out.mutable_data();
            for (const auto& pmf : sol)
                ptr = std::copy(pmf.probs.begin(), pmf.probs.end(), ptr);
            return out;
        },
        py::arg("family"), py::arg("k"), py::arg("rho"), py::arg("lam"), py::arg("alpha"),
        py::arg("m_max"), py::arg("grid"),
        "Marginal pmfs p_m(t) on the grid; rows follow the grid, columns m = 0..m_max.");
    m.def(
        "residual_nonhomogeneous",
        [](const std::string& family, int k, py::object rho, const rates::RateFunction& rate,
           double alpha, double v,
           py::array_t<double, py::array::c_style | py::array::forcecast> grid, int m_max,
           double quad_tol, double t_min) {
            std::optional<double> r;
            if (!rho.is_none()) r = rho.cast<double>();
            const auto g = as_vector(grid);
            return governing::residual_nonhomogeneous(processes::family_from_string(family), k,
                                                      r, rate, alpha, v, g, m_max, quad_tol,
                                                      t_min);
        },
        py::arg("family"), py::arg("k"), py::arg("rho"), py::arg("rate"), py::arg("alpha"),
        py::arg("v"), py::arg("grid"), py::arg("m_max"), py::arg("quad_tol") = 1e-9,
        py::arg("t_min") = 0.0);
}
