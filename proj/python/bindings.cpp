#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mixedframe/app.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/galilei.hpp"
#include "mixedframe/group_algebra.hpp"
#include "mixedframe/quantum_system.hpp"
#include "mixedframe/thermal.hpp"

namespace py = pybind11;
using namespace mixedframe;

namespace {

std::vector<Complex> amplitudes_of(const WaveFunction& psi) { return {psi.amplitudes().begin(), psi.amplitudes().end()}; }

GroupDensity from_pairs(const std::vector<std::pair<double, GroupDensity>>& parts) { return mix(parts); }

}  // namespace

PYBIND11_MODULE(mixedframe, m) {
  m.doc() = "Mixed-frame translations: group densities, smeared quantum states, thermal and Galilei sectors";
  m.attr("__version__") = app::version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  // group algebra
  py::class_<GroupDensity>(m, "GroupDensity")
      .def_static("parse", &parse_group_density, py::arg("text"))
      .def("components",
           [](const GroupDensity& rho) {
             py::list out;
             for (const auto& c : rho.components()) {
               if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
                 out.append(py::make_tuple(c.weight, "dirac", d->location));
               } else {
                 const auto& g = std::get<GaussianComponent>(c.component);
                 out.append(py::make_tuple(c.weight, "gaussian", g.mean, g.variance));
               }
             }
             return out;
           })
      .def("continuous_density", &GroupDensity::continuous_density, py::arg("a"))
      .def("__str__", &to_text)
      .def("__repr__", [](const GroupDensity& rho) { return "GroupDensity('" + to_text(rho) + "')"; });

  m.def("make_delta", &make_delta, py::arg("a0"));
  m.def("make_gaussian", &make_gaussian, py::arg("mean"), py::arg("variance"));
  m.def("mix", &from_pairs, py::arg("parts"), "Convex combination of (weight, density) pairs.");
  m.def("convolve", &convolve);
  m.def("antipode", &antipode);
  m.def("is_pure", &is_pure);
  m.def("evaluate", &evaluate, py::arg("rho"), py::arg("f"));
  m.def("characteristic_value", &characteristic_value, py::arg("rho"), py::arg("p"));
  m.def("canonical_distance", &canonical_distance, py::arg("lhs"), py::arg("rhs"), py::arg("match_tol") = 1e-8);
  m.def("approx_equal", &approx_equal, py::arg("lhs"), py::arg("rhs"), py::arg("tol") = 1e-10);

  py::class_<InvertibilityVerdict>(m, "InvertibilityVerdict")
      .def_readonly("invertible", &InvertibilityVerdict::invertible)
      .def_readonly("witness", &InvertibilityVerdict::witness)
      .def_readonly("min_modulus", &InvertibilityVerdict::min_modulus);
  m.def("is_invertible", &is_invertible, py::arg("rho"), py::arg("band"), py::arg("floor"));

  // quantum system
  py::class_<PositionGrid>(m, "PositionGrid")
      .def(py::init<std::size_t, double>(), py::arg("n_points"), py::arg("extent"))
      .def_property_readonly("size", &PositionGrid::size)
      .def_property_readonly("extent", &PositionGrid::extent)
      .def_property_readonly("spacing", &PositionGrid::spacing)
      .def("points", &PositionGrid::points);

  py::class_<WaveFunction>(m, "WaveFunction")
      .def_static("normalized", &WaveFunction::normalized, py::arg("grid"), py::arg("amplitudes"))
      .def_property_readonly("grid", &WaveFunction::grid)
      .def("amplitudes", &amplitudes_of)
      .def("norm", &WaveFunction::norm);

  py::class_<PureMixture>(m, "PureMixture")
      .def(py::init([](const std::vector<std::pair<double, WaveFunction>>& terms) {
             std::vector<MixtureTerm> t;
             for (const auto& [w, psi] : terms) t.push_back({w, psi});
             return PureMixture(std::move(t));
           }),
           py::arg("terms"))
      .def_static("pure", &PureMixture::pure, py::arg("psi"))
      .def_property_readonly("grid", &PureMixture::grid)
      .def("__len__", [](const PureMixture& s) { return s.terms().size(); })
      .def("weights", [](const PureMixture& s) {
        std::vector<double> w;
        for (const auto& t : s.terms()) w.push_back(t.weight);
        return w;
      });

  py::class_<PositionDensity>(m, "PositionDensity")
      .def_readonly("grid", &PositionDensity::grid)
      .def_readonly("values", &PositionDensity::values);

  py::class_<DensityMoments>(m, "DensityMoments")
      .def_readonly("mass", &DensityMoments::mass)
      .def_readonly("mean", &DensityMoments::mean)
      .def_readonly("variance", &DensityMoments::variance);

  py::enum_<Superposition>(m, "Superposition").value("Sum", Superposition::Sum).value("Difference", Superposition::Difference);

  m.def("gaussian_wavepacket", &gaussian_wavepacket, py::arg("grid"), py::arg("alpha"), py::arg("center") = 0.0);
  m.def("two_gaussian_superposition", &two_gaussian_superposition, py::arg("grid"), py::arg("alpha"), py::arg("a2"),
        py::arg("sign"));
  m.def("translate", &translate, py::arg("psi"), py::arg("a"));
  m.def("act_pure", &act_pure, py::arg("a"), py::arg("state"));
  m.def(
      "act_mixed",
      [](const GroupDensity& rho, const PureMixture& state, int quad_order) {
        ChannelOptions options;
        options.quad_order = quad_order;
        return act_mixed(rho, state, options);
      },
      py::arg("rho"), py::arg("state"), py::arg("quad_order") = 64);
  m.def("coherently_translated", py::overload_cast<const GroupDensity&, const WaveFunction&>(&coherently_translated),
        py::arg("rho"), py::arg("psi"));
  m.def("position_density", py::overload_cast<const PureMixture&>(&position_density), py::arg("state"));
  m.def("position_density", py::overload_cast<const WaveFunction&>(&position_density), py::arg("psi"));
  m.def("purity", &purity, py::arg("state"));
  m.def("moments", &moments, py::arg("density"));

  // thermal
  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init([](double hbar, double k) { return PhysicalConstants{hbar, k}; }), py::arg("hbar") = 1.0,
           py::arg("k_boltzmann") = 1.0)
      .def_readwrite("hbar", &PhysicalConstants::hbar)
      .def_readwrite("k_boltzmann", &PhysicalConstants::k_boltzmann);

  py::class_<ThermalParameters>(m, "ThermalParameters")
      .def(py::init([](double beta, double mass, PhysicalConstants c) { return ThermalParameters{beta, mass, c}; }),
           py::arg("beta"), py::arg("mass"), py::arg("constants") = PhysicalConstants{})
      .def_readwrite("beta", &ThermalParameters::beta)
      .def_readwrite("mass", &ThermalParameters::mass);

  py::class_<MomentumGrid>(m, "MomentumGrid")
      .def(py::init<std::size_t, double>(), py::arg("n_points"), py::arg("p_max"))
      .def_property_readonly("size", &MomentumGrid::size)
      .def_property_readonly("spacing", &MomentumGrid::spacing)
      .def("points", &MomentumGrid::points);

  py::class_<MomentumMixture>(m, "MomentumMixture")
      .def_property_readonly("grid", &MomentumMixture::grid)
      .def("weights", &MomentumMixture::weights);

  m.def(
      "energy_smearing_density",
      [](const ThermalParameters& tp, const std::vector<double>& e) { return energy_smearing_density(tp, e); },
      py::arg("tp"), py::arg("energies"));
  m.def(
      "momentum_smearing_density",
      [](const ThermalParameters& tp, const std::vector<double>& p) { return momentum_smearing_density(tp, p); },
      py::arg("tp"), py::arg("momenta"));
  m.def("energy_density_integral", &energy_density_integral, py::arg("tp"));
  m.def("energy_momentum_consistency", &energy_momentum_consistency, py::arg("tp"), py::arg("n_check"));
  m.def("beta_of_temperature", &beta_of_temperature, py::arg("temperature"),
        py::arg("constants") = PhysicalConstants{});
  m.def("temperature_of_beta", &temperature_of_beta, py::arg("beta"), py::arg("constants") = PhysicalConstants{});
  m.def("thermal_state", &thermal_state, py::arg("tp"), py::arg("grid"));
  m.def("time_translate_diagonal", &time_translate_diagonal, py::arg("state"), py::arg("t0"), py::arg("tp"));
  m.def("purity_proxy", &purity_proxy, py::arg("state"));

  // galilei
  py::class_<GalileiParams>(m, "GalileiParams")
      .def(py::init([](double mass, double time, double hbar) { return GalileiParams{mass, time, hbar}; }),
           py::arg("mass") = 1.0, py::arg("time") = 0.0, py::arg("hbar") = 1.0)
      .def_readwrite("mass", &GalileiParams::mass)
      .def_readwrite("time", &GalileiParams::time)
      .def_readwrite("hbar", &GalileiParams::hbar);

  py::class_<MomentumEigenLabel>(m, "MomentumEigenLabel")
      .def_readonly("momentum", &MomentumEigenLabel::momentum)
      .def_readonly("phase", &MomentumEigenLabel::phase);

  py::class_<BoostDensity>(m, "BoostDensity").def_readonly("velocity", &BoostDensity::velocity);

  m.def("canonical_phase", &canonical_phase, py::arg("phase"));
  m.def("boost_pure_label", &boost_pure_label, py::arg("v"), py::arg("p"), py::arg("params"));
  m.def("fringe_phase",
        [](double v, double p, double alpha, const PositionGrid& grid, const GalileiParams& params) {
          return fringe_phase(v, p, alpha, grid, params);
        },
        py::arg("v"), py::arg("p"), py::arg("alpha"), py::arg("grid"), py::arg("params"));
  m.def("relative_fringe_shift", &relative_fringe_shift, py::arg("v"), py::arg("p1"), py::arg("p2"), py::arg("alpha"),
        py::arg("grid"), py::arg("params"));
  m.def("thermal_boost_density", &thermal_boost_density, py::arg("temperature"), py::arg("v0"), py::arg("mass"),
        py::arg("constants") = PhysicalConstants{});
  m.def("boost_mixed", &boost_mixed, py::arg("rho"), py::arg("p"), py::arg("params"), py::arg("grid"));
  m.def(
      "bch_residual",
      [](double v, double alpha, std::size_t n, double extent, const GalileiParams& params) {
        const PositionGrid grid(n, extent);
        return bch_residual(v, gaussian_wavepacket(grid, alpha), build_operators(grid, params));
      },
      py::arg("v"), py::arg("alpha"), py::arg("n_points"), py::arg("extent"), py::arg("params"),
      "Dense-exponential vs factorized boost on a centered Gaussian packet.");
}
