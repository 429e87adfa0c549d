#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowlab/config.hpp"
#include "flowlab/fourier.hpp"
#include "flowlab/metrics.hpp"
#include "flowlab/mlp_field.hpp"
#include "flowlab/viewtime.hpp"

namespace py = pybind11;
using namespace flowlab;

namespace {

Tensor tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  Shape shape(static_cast<std::size_t>(arr.ndim()));
  for (py::ssize_t i = 0; i < arr.ndim(); ++i) {
    shape[static_cast<std::size_t>(i)] = static_cast<std::size_t>(arr.shape(i));
  }
  std::vector<double> values(arr.data(), arr.data() + arr.size());
  return Tensor(std::move(shape), std::move(values));
}

py::array_t<double> array_from_tensor(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.rank());
  for (std::size_t i = 0; i < t.rank(); ++i) {
    shape[i] = static_cast<py::ssize_t>(t.shape()[i]);
  }
  py::array_t<double> out(shape);
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

using NdArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

SamplerConfig config_from_kwargs(const std::string& method, double t0, std::size_t steps,
                                 double lambda, const std::string& gamma_mode,
                                 double gamma_value, double mcs_weight, double cutoff,
                                 std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.method = method_from_string(method);
  cfg.t0 = t0;
  cfg.steps = steps;
  cfg.lambda = lambda;
  if (gamma_mode == "sigma_t") {
    cfg.gamma_mode = GammaMode::sigma_t;
  } else if (gamma_mode == "constant") {
    cfg.gamma_mode = GammaMode::constant;
  } else {
    throw std::invalid_argument("gamma_mode must be 'sigma_t' or 'constant'");
  }
  cfg.gamma_value = gamma_value;
  cfg.mcs_weight = mcs_weight;
  cfg.cutoff = cutoff;
  cfg.seed = seed;
  return cfg;
}

GmmSpec gmm_from_python(const std::vector<double>& weights, const NdArray& means,
                        const std::vector<double>& sigmas) {
  const Tensor m = tensor_from_array(means);
  if (m.rank() != 2) throw std::invalid_argument("means must be [k, d]");
  std::vector<GaussianSpec> comps;
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const double s = sigmas.size() == 1 ? sigmas.front() : sigmas.at(k);
    comps.push_back(GaussianSpec::isotropic(m.row_copy(k), s));
  }
  return GmmSpec(weights, std::move(comps));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "flowlab core: flow-matching restoration samplers and metrics";

  py::class_<SeededRng>(m, "SeededRng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
      .def("split", &SeededRng::split, py::arg("key"))
      .def("normal",
           [](SeededRng& rng, const std::vector<std::size_t>& shape) {
             return array_from_tensor(sample_standard_normal(rng, shape));
           },
           py::arg("shape"))
      .def("next_normal", &SeededRng::next_normal)
      .def("next_uniform", &SeededRng::next_uniform);

  py::class_<GmmSpec>(m, "GmmSpec")
      .def(py::init(&gmm_from_python), py::arg("weights"), py::arg("means"), py::arg("sigmas"))
      .def_static("two_modes",
                  [](const NdArray& mode_mean, double stddev) {
                    return GmmSpec::two_modes(tensor_from_array(mode_mean), stddev);
                  },
                  py::arg("mode_mean"), py::arg("stddev"))
      .def("sample",
           [](const GmmSpec& spec, std::uint64_t seed, std::size_t n) {
             SeededRng rng(seed, fnv1a64("flowlab.py.sample"));
             return array_from_tensor(spec.sample(rng, n));
           },
           py::arg("seed"), py::arg("n"))
      .def_property_readonly("dim", &GmmSpec::dim);

  m.def("sigma_t", [](double t, double shift) { return sigma(NoiseSchedule{shift}, t); },
        py::arg("t"), py::arg("shift") = 1.0);

  m.def("frequency_filter",
        [](const NdArray& signal, double cutoff, const std::string& mode) {
          const FilterMode fm = mode == "low"    ? FilterMode::low
                                : mode == "high" ? FilterMode::high
                                                 : throw std::invalid_argument(
                                                       "mode must be 'low' or 'high'");
          return array_from_tensor(frequency_filter(tensor_from_array(signal), cutoff, fm));
        },
        py::arg("signal"), py::arg("cutoff"), py::arg("mode"));

  m.def("posterior_mean",
        [](const NdArray& x_t, const NdArray& v, double sigma_t) {
          return array_from_tensor(
              posterior_mean(tensor_from_array(x_t), tensor_from_array(v), sigma_t));
        },
        py::arg("x_t"), py::arg("v"), py::arg("sigma_t"));
  m.def("posterior_noise",
        [](const NdArray& x_t, const NdArray& v, double sigma_t) {
          return array_from_tensor(
              posterior_noise(tensor_from_array(x_t), tensor_from_array(v), sigma_t));
        },
        py::arg("x_t"), py::arg("v"), py::arg("sigma_t"));
  m.def("guidance_step",
        [](const NdArray& x0_hat, const NdArray& y, const NdArray& mask, double lambda) {
          return array_from_tensor(guidance_step(tensor_from_array(x0_hat),
                                                 tensor_from_array(y),
                                                 tensor_from_array(mask), lambda));
        },
        py::arg("x0_hat"), py::arg("y"), py::arg("mask"), py::arg("lambda_"));

  m.def("gmm_velocity",
        [](const GmmSpec& spec, const NdArray& x, double t) {
          const AnalyticGmmField field(spec);
          return array_from_tensor(field.velocity(tensor_from_array(x), t));
        },
        py::arg("spec"), py::arg("x"), py::arg("t"),
        "Exact conditional-expectation velocity of the mixture target.");

  m.def("make_time_grid", [](double t0, std::size_t steps) {
    return make_time_grid(t0, steps).times;
  }, py::arg("t0"), py::arg("steps"));

  m.def("restore",
        [](const GmmSpec& target, const NdArray& y, const NdArray& mask,
           const std::string& method, double t0, std::size_t steps, double lambda,
           const std::string& gamma_mode, double gamma_value, double mcs_weight, double cutoff,
           std::uint64_t seed) {
          const SamplerConfig cfg = config_from_kwargs(method, t0, steps, lambda, gamma_mode,
                                                       gamma_value, mcs_weight, cutoff, seed);
          const AnalyticGmmField field(target);
          SeededRng rng(seed, fnv1a64("flowlab.py.restore"));
          const SampleResult result =
              restore(field, tensor_from_array(y), tensor_from_array(mask), cfg, rng);
          py::dict trace;
          std::vector<double> residuals;
          residuals.reserve(result.trace.rows.size());
          for (const auto& row : result.trace.rows) residuals.push_back(row.masked_residual);
          trace["masked_residual"] = residuals;
          return py::make_tuple(array_from_tensor(result.sample), trace);
        },
        py::arg("target"), py::arg("y"), py::arg("mask"), py::arg("method") = "self_guided_sde",
        py::arg("t0") = 0.6, py::arg("steps") = 30, py::arg("lambda_") = 0.2,
        py::arg("gamma_mode") = "sigma_t", py::arg("gamma_value") = 0.0,
        py::arg("mcs_weight") = 0.5, py::arg("cutoff") = 0.25, py::arg("seed") = 0,
        "Restore a degraded cloud with the chosen sampler and the exact target field.");

  m.def("sliced_wasserstein",
        [](const NdArray& a, const NdArray& b, std::size_t n_proj, std::uint64_t seed) {
          SeededRng rng(seed, fnv1a64("flowlab.py.sw"));
          return sliced_wasserstein(tensor_from_array(a), tensor_from_array(b), n_proj, rng);
        },
        py::arg("a"), py::arg("b"), py::arg("n_proj") = 128, py::arg("seed") = 0);
  m.def("masked_mse",
        [](const NdArray& x, const NdArray& y, const NdArray& mask) {
          return masked_mse(tensor_from_array(x), tensor_from_array(y),
                            tensor_from_array(mask));
        },
        py::arg("x"), py::arg("y"), py::arg("mask"));

  m.def("schedule",
        [](const std::string& mode, std::size_t views, std::size_t frames, std::size_t n_traj) {
          ScheduleConfig cfg{views, frames, n_traj, schedule_mode_from_string(mode)};
          const auto trajectories = make_schedule(cfg);
          std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
          out.reserve(trajectories.size());
          for (const auto& t : trajectories) out.push_back(t.pairs);
          return out;
        },
        py::arg("mode"), py::arg("views"), py::arg("frames"), py::arg("n_traj"));

  m.def("train_velocity_model",
        [](const GmmSpec& target, std::size_t steps, std::size_t batch, double lr,
           std::uint64_t seed, std::size_t hidden, const std::string& save_path) {
          TrainConfig cfg;
          cfg.steps = steps;
          cfg.batch = batch;
          cfg.learning_rate = lr;
          cfg.seed = seed;
          cfg.hidden = hidden;
          MlpVelocityField field = train_mlp_field(sampler_of(target), target.dim(), cfg);
          if (!save_path.empty()) save_mlp_field(field, save_path);
          SeededRng eval_rng(seed, fnv1a64("flowlab.py.train.eval"));
          FmBatch eval;
          eval.x0 = target.sample(eval_rng, 1024);
          eval.x1 = eval_rng.normal({1024, target.dim()});
          eval.t.resize(1024);
          for (double& t : eval.t) t = eval_rng.next_uniform();
          return fm_loss(field, eval);
        },
        py::arg("target"), py::arg("steps") = 2000, py::arg("batch") = 128,
        py::arg("lr") = 1e-3, py::arg("seed") = 0, py::arg("hidden") = 64,
        py::arg("save_path") = "",
        "Train the toy velocity model; returns the held-out matching loss.");
}
